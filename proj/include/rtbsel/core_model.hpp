/*
Copyright 2026 The rtbsel Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rtbsel/error.hpp"
#include "rtbsel/image.hpp"

namespace rtbsel {

using Id = std::string;

inline constexpr std::size_t kNumMetrics = 6;

// Fixed metric order used by every vector in the library.
enum Metric : std::size_t {
  kRevenue = 0,
  kUtility = 1,
  kMemorability = 2,
  kCtr = 3,
  kRelevance = 4,
  kSaliency = 5,
};

std::string_view metric_name(std::size_t k);

// Pixel rectangle, origin top-left.
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool operator==(const Rect&) const = default;
};

struct AdSlot {
  Id id;
  Rect rect;

  bool operator==(const AdSlot&) const = default;
};

struct Webpage {
  Id id;
  std::string url;
  std::string title;
  std::string keywords;
  std::string description;
  std::string content;
  // Path as written in the dataset (relative to the dataset root), empty if none.
  std::string snapshot_path;
  std::shared_ptr<const GrayImage> snapshot;
  std::vector<AdSlot> slots;

  // title + keywords + description + content, space separated.
  std::string text() const;
};

struct Ad {
  Id id;
  Id advertiser_id;
  std::string company_domain;
  std::string landing_title;
  std::string landing_keywords;
  std::string landing_description;
  std::string image_path;
  std::shared_ptr<const GrayImage> image;
  double memorability = 0.0;
  double ctr = 0.0;
  // Private value per impression; bids stand in for it when absent.
  std::optional<double> value;

  std::string landing_text() const;
};

struct BidEntry {
  Id ad_id;
  Id advertiser_id;
  double bid = 0.0;
  double value = 0.0;

  bool operator==(const BidEntry&) const = default;
};

struct AuctionRequest {
  Id id;
  Id webpage_id;
  std::vector<std::vector<BidEntry>> per_slot_bids;

  std::size_t slot_count() const { return per_slot_bids.size(); }
};

// One joint assignment: picks[s] indexes into the bid list of slot s.
struct CandidateRow {
  std::vector<std::size_t> picks;

  bool operator==(const CandidateRow&) const = default;
};

struct MetricVector {
  std::array<double, kNumMetrics> x{};

  double& operator[](std::size_t k) { return x[k]; }
  double operator[](std::size_t k) const { return x[k]; }
  bool operator==(const MetricVector&) const = default;
};

// Point on the 6-simplex. Construction validates.
class WeightVector {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit WeightVector(const std::array<double, kNumMetrics>& gamma);

  static WeightVector basis(std::size_t k);

  const std::array<double, kNumMetrics>& gamma() const { return gamma_; }
  double operator[](std::size_t k) const { return gamma_[k]; }
  bool operator==(const WeightVector&) const = default;

 private:
  std::array<double, kNumMetrics> gamma_;
};

// theta[0] <= 0 bounds the revenue loss; theta[1..5] >= 0 demand minimum gains.
class ThresholdVector {
 public:
  ThresholdVector() = default;
  explicit ThresholdVector(const std::array<double, kNumMetrics>& theta);

  static ThresholdVector revenue_only(double theta1);

  const std::array<double, kNumMetrics>& theta() const { return theta_; }
  double operator[](std::size_t k) const { return theta_[k]; }

 private:
  std::array<double, kNumMetrics> theta_{};
};

struct SelectionResult {
  Id request_id;
  CandidateRow row;
  double rank_score = 0.0;
  MetricVector raw_metrics;
  bool is_fallback = false;

  bool operator==(const SelectionResult&) const = default;
};

struct ChangeReport {
  std::array<double, kNumMetrics> xi{};
  // False when the baseline sum of metric k is zero while the numerator is not.
  std::array<bool, kNumMetrics> defined{true, true, true, true, true, true};
  std::size_t n = 0;
};

void validate(const AdSlot& slot);
void validate(const Webpage& page);
void validate(const Ad& ad);
void validate(const BidEntry& bid);

// Checks the request against its webpage and returns it unchanged.
const AuctionRequest& validate_request(const AuctionRequest& request,
                                       const Webpage& webpage);

}  // namespace rtbsel
