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
#include <functional>
#include <span>
#include <vector>

#include "rtbsel/core_model.hpp"

namespace rtbsel {

// Per-bidder inputs to the six metrics of one slot.
struct BidderMetrics {
  double payment = 0.0;
  double value = 0.0;
  double memorability = 0.0;
  double ctr = 0.0;
  double relevance = 0.0;
  double saliency = 0.0;

  // The bidder's term in each of the six sums.
  MetricVector contribution() const {
    return MetricVector{{payment, value - payment, memorability, ctr, relevance, saliency}};
  }
};

// Precomputed tables for one request. slots[s][i] belongs to bid i of slot s.
struct MetricContext {
  std::vector<std::vector<BidderMetrics>> slots;
  double reserve_price = 0.0;

  std::size_t slot_count() const { return slots.size(); }
};

struct AdAttributes {
  double memorability = 0.0;
  double ctr = 0.0;
  double relevance = 0.0;
  double saliency = 0.0;
};

using AttributeLookup = std::function<AdAttributes(std::size_t slot, const BidEntry& bid)>;

// Generalized second price within one slot. Bids are ranked descending with
// ties broken by advertiser id ascending; the bidder at rank p pays the bid
// at rank p + 1, or the reserve when ranked last.
double gsp_payment(std::span<const BidEntry> slot_bids, const Id& advertiser, double reserve = 0.0);

// Payments for every bidder of the slot, aligned with slot_bids.
std::vector<double> gsp_payments(std::span<const BidEntry> slot_bids, double reserve = 0.0);

MetricContext build_metric_context(const AuctionRequest& request, double reserve,
                                   const AttributeLookup& attributes);

// Raw sums over the row's picks, one per slot, accumulated in slot order.
MetricVector compute_metric_vector(const CandidateRow& row, const MetricContext& ctx);

struct ColumnExtrema {
  std::array<double, kNumMetrics> min{};
  std::array<double, kNumMetrics> max{};
};

// Extrema of each metric over every row of the full cartesian product,
// obtained slot by slot since each metric is a sum of per-slot terms.
ColumnExtrema column_extrema(const MetricContext& ctx);

// (x - min) / (max - min) per metric, 0 when max == min.
MetricVector normalize(const MetricVector& raw, const ColumnExtrema& extrema);

}  // namespace rtbsel
