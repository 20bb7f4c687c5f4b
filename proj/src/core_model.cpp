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

#include "rtbsel/core_model.hpp"

#include <cmath>
#include <unordered_set>

namespace rtbsel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SlotMismatch: return "SlotMismatch";
    case ErrorCode::DuplicateAdvertiserInSlot: return "DuplicateAdvertiserInSlot";
    case ErrorCode::EmptySlotBids: return "EmptySlotBids";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::ImageLoadError: return "ImageLoadError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::TooFewDistinctVectors: return "TooFewDistinctVectors";
    case ErrorCode::UnclusteredAd: return "UnclusteredAd";
    case ErrorCode::SlotOutOfBounds: return "SlotOutOfBounds";
    case ErrorCode::DegenerateImage: return "DegenerateImage";
    case ErrorCode::UnknownAdvertiser: return "UnknownAdvertiser";
    case ErrorCode::MissingMetricEntry: return "MissingMetricEntry";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::EmptyTraining: return "EmptyTraining";
    case ErrorCode::TooFewRequests: return "TooFewRequests";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::SlotMismatch:
    case ErrorCode::DuplicateAdvertiserInSlot:
    case ErrorCode::EmptySlotBids:
    case ErrorCode::InvalidArgument:
    case ErrorCode::ParseError:
    case ErrorCode::DanglingReference:
    case ErrorCode::ImageLoadError:
    case ErrorCode::UnsupportedFormat:
    case ErrorCode::InvalidSpec:
      return true;
    default:
      return false;
  }
}

std::string_view metric_name(std::size_t k) {
  static constexpr std::array<std::string_view, kNumMetrics> kNames = {
      "revenue", "utility", "memorability", "ctr", "relevance", "saliency"};
  return k < kNumMetrics ? kNames[k] : "unknown";
}

std::string Webpage::text() const {
  return title + " " + keywords + " " + description + " " + content;
}

std::string Ad::landing_text() const {
  return landing_title + " " + landing_keywords + " " + landing_description;
}

WeightVector::WeightVector(const std::array<double, kNumMetrics>& gamma) : gamma_(gamma) {
  double sum = 0.0;
  for (double g : gamma_) {
    if (!(g >= 0.0 && g <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "weight outside [0,1]");
    }
    sum += g;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw Error(ErrorCode::InvalidArgument, "weights do not sum to 1");
  }
}

WeightVector WeightVector::basis(std::size_t k) {
  std::array<double, kNumMetrics> g{};
  g.at(k) = 1.0;
  return WeightVector(g);
}

ThresholdVector::ThresholdVector(const std::array<double, kNumMetrics>& theta)
    : theta_(theta) {
  if (!(theta_[0] <= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "revenue threshold must be <= 0");
  }
  for (std::size_t k = 1; k < kNumMetrics; ++k) {
    if (!(theta_[k] >= 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "gain thresholds must be >= 0");
    }
  }
}

ThresholdVector ThresholdVector::revenue_only(double theta1) {
  return ThresholdVector({theta1, 0, 0, 0, 0, 0});
}

void validate(const AdSlot& slot) {
  if (slot.rect.width <= 0 || slot.rect.height <= 0 || slot.rect.x < 0 || slot.rect.y < 0) {
    throw Error(ErrorCode::InvalidArgument, "slot " + slot.id + " has an invalid rectangle");
  }
}

void validate(const Webpage& page) {
  if (page.slots.empty()) {
    throw Error(ErrorCode::InvalidArgument, "webpage " + page.id + " has no slots");
  }
  std::unordered_set<Id> ids;
  for (const auto& slot : page.slots) {
    validate(slot);
    if (!ids.insert(slot.id).second) {
      throw Error(ErrorCode::InvalidArgument, "webpage " + page.id + " repeats slot " + slot.id);
    }
    if (page.snapshot) {
      const Rect& r = slot.rect;
      if (r.x + r.width > page.snapshot->width || r.y + r.height > page.snapshot->height) {
        throw Error(ErrorCode::SlotOutOfBounds,
                    "slot " + slot.id + " exceeds snapshot of " + page.id);
      }
    }
  }
}

void validate(const Ad& ad) {
  if (!(ad.memorability >= 0.0 && ad.memorability <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "ad " + ad.id + " memorability outside [0,1]");
  }
  if (!(ad.ctr >= 0.0 && ad.ctr <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "ad " + ad.id + " ctr outside [0,1]");
  }
  if (ad.company_domain.empty()) {
    throw Error(ErrorCode::InvalidArgument, "ad " + ad.id + " has no company domain");
  }
  if (ad.value && !(*ad.value >= 0.0 && std::isfinite(*ad.value))) {
    throw Error(ErrorCode::InvalidArgument, "ad " + ad.id + " has a negative value");
  }
}

void validate(const BidEntry& bid) {
  if (!(bid.bid >= 0.0 && std::isfinite(bid.bid)) ||
      !(bid.value >= 0.0 && std::isfinite(bid.value))) {
    throw Error(ErrorCode::InvalidArgument, "bid for ad " + bid.ad_id + " is negative");
  }
}

const AuctionRequest& validate_request(const AuctionRequest& request, const Webpage& webpage) {
  if (request.webpage_id != webpage.id) {
    throw Error(ErrorCode::InvalidArgument,
                "request " + request.id + " does not reference webpage " + webpage.id);
  }
  if (request.per_slot_bids.size() != webpage.slots.size()) {
    throw Error(ErrorCode::SlotMismatch,
                "request " + request.id + " has " + std::to_string(request.per_slot_bids.size()) +
                    " bid lists for " + std::to_string(webpage.slots.size()) + " slots");
  }
  for (std::size_t s = 0; s < request.per_slot_bids.size(); ++s) {
    const auto& bids = request.per_slot_bids[s];
    if (bids.empty()) {
      throw Error(ErrorCode::EmptySlotBids,
                  "request " + request.id + " slot " + std::to_string(s) + " has no bids");
    }
    std::unordered_set<Id> seen;
    for (const auto& b : bids) {
      validate(b);
      if (!seen.insert(b.advertiser_id).second) {
        throw Error(ErrorCode::DuplicateAdvertiserInSlot,
                    "request " + request.id + " slot " + std::to_string(s) +
                        " lists advertiser " + b.advertiser_id + " twice");
      }
    }
  }
  return request;
}

}  // namespace rtbsel
