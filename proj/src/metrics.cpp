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

#include "rtbsel/metrics.hpp"

#include <algorithm>
#include <numeric>

namespace rtbsel {

namespace {

std::vector<std::size_t> gsp_order(std::span<const BidEntry> bids) {
  std::vector<std::size_t> order(bids.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bids[a].bid != bids[b].bid) return bids[a].bid > bids[b].bid;
    return bids[a].advertiser_id < bids[b].advertiser_id;
  });
  return order;
}

}  // namespace

std::vector<double> gsp_payments(std::span<const BidEntry> slot_bids, double reserve) {
  const auto order = gsp_order(slot_bids);
  std::vector<double> pay(slot_bids.size(), reserve);
  for (std::size_t p = 0; p + 1 < order.size(); ++p) pay[order[p]] = slot_bids[order[p + 1]].bid;
  return pay;
}

double gsp_payment(std::span<const BidEntry> slot_bids, const Id& advertiser, double reserve) {
  const auto order = gsp_order(slot_bids);
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (slot_bids[order[p]].advertiser_id == advertiser) {
      return p + 1 < order.size() ? slot_bids[order[p + 1]].bid : reserve;
    }
  }
  throw Error(ErrorCode::UnknownAdvertiser, "advertiser " + advertiser + " did not bid");
}

MetricContext build_metric_context(const AuctionRequest& request, double reserve,
                                   const AttributeLookup& attributes) {
  MetricContext ctx;
  ctx.reserve_price = reserve;
  ctx.slots.resize(request.slot_count());
  for (std::size_t s = 0; s < request.slot_count(); ++s) {
    const auto& bids = request.per_slot_bids[s];
    const auto payments = gsp_payments(bids, reserve);
    auto& table = ctx.slots[s];
    table.reserve(bids.size());
    for (std::size_t i = 0; i < bids.size(); ++i) {
      const AdAttributes a = attributes(s, bids[i]);
      table.push_back({payments[i], bids[i].value, a.memorability, a.ctr, a.relevance, a.saliency});
    }
  }
  return ctx;
}

MetricVector compute_metric_vector(const CandidateRow& row, const MetricContext& ctx) {
  if (row.picks.size() != ctx.slot_count()) {
    throw Error(ErrorCode::MissingMetricEntry, "row length differs from slot count");
  }
  MetricVector x;
  for (std::size_t s = 0; s < row.picks.size(); ++s) {
    if (row.picks[s] >= ctx.slots[s].size()) {
      throw Error(ErrorCode::MissingMetricEntry,
                  "slot " + std::to_string(s) + " has no entry " + std::to_string(row.picks[s]));
    }
    const MetricVector c = ctx.slots[s][row.picks[s]].contribution();
    for (std::size_t k = 0; k < kNumMetrics; ++k) x[k] = x[k] + c[k];
  }
  return x;
}

ColumnExtrema column_extrema(const MetricContext& ctx) {
  ColumnExtrema e;
  for (const auto& table : ctx.slots) {
    if (table.empty()) continue;
    MetricVector lo = table.front().contribution();
    MetricVector hi = lo;
    for (const auto& b : table) {
      const MetricVector c = b.contribution();
      for (std::size_t k = 0; k < kNumMetrics; ++k) {
        lo[k] = std::min(lo[k], c[k]);
        hi[k] = std::max(hi[k], c[k]);
      }
    }
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      e.min[k] = e.min[k] + lo[k];
      e.max[k] = e.max[k] + hi[k];
    }
  }
  return e;
}

MetricVector normalize(const MetricVector& raw, const ColumnExtrema& extrema) {
  MetricVector out;
  for (std::size_t k = 0; k < kNumMetrics; ++k) {
    const double range = extrema.max[k] - extrema.min[k];
    out[k] = range > 0.0 ? std::clamp((raw[k] - extrema.min[k]) / range, 0.0, 1.0) : 0.0;
  }
  return out;
}

}  // namespace rtbsel
