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

#include "rtbsel/selection.hpp"

#include <limits>

#include "rtbsel/simd/kernels.hpp"

namespace rtbsel {

std::uint64_t omega_size(const AuctionRequest& request) {
  std::uint64_t z = 1;
  for (const auto& bids : request.per_slot_bids) {
    const std::uint64_t m = bids.size();
    if (m == 0) return 0;
    if (z > std::numeric_limits<std::uint64_t>::max() / m) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    z *= m;
  }
  return z;
}

OmegaView::iterator::iterator(std::shared_ptr<const std::vector<std::size_t>> radices,
                              bool at_end)
    : radices_(std::move(radices)), done_(at_end) {
  if (!done_) {
    row_.picks.assign(radices_->size(), 0);
    for (std::size_t r : *radices_) {
      if (r == 0) done_ = true;
    }
    if (radices_->empty()) done_ = true;
  }
}

OmegaView::iterator& OmegaView::iterator::operator++() {
  const auto& radix = *radices_;
  std::size_t s = radix.size();
  while (s > 0) {
    --s;
    if (++row_.picks[s] < radix[s]) {
      ++ordinal_;
      return *this;
    }
    row_.picks[s] = 0;
  }
  ++ordinal_;
  done_ = true;
  return *this;
}

OmegaView::OmegaView(std::vector<std::size_t> radices)
    : radices_(std::make_shared<const std::vector<std::size_t>>(std::move(radices))) {}

OmegaView enumerate_rows(const AuctionRequest& request, const EnumerationBudget& budget) {
  const std::uint64_t z = omega_size(request);
  if (z > budget.max_rows) {
    throw Error(ErrorCode::BudgetExceeded, "request " + request.id + " has " + std::to_string(z) +
                                               " candidate rows");
  }
  std::vector<std::size_t> radices;
  radices.reserve(request.slot_count());
  for (const auto& bids : request.per_slot_bids) radices.push_back(bids.size());
  return OmegaView(std::move(radices));
}

ConflictTable::ConflictTable(const AuctionRequest& request, const CompetitorRelation& relation) {
  const std::size_t n = request.slot_count();
  for (const auto& bids : request.per_slot_bids) sizes_.push_back(bids.size());
  tables_.resize(n * (n > 0 ? n - 1 : 0) / 2);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      auto& table = tables_[pair_index(s, t)];
      table.assign(sizes_[s] * sizes_[t], 0);
      for (std::size_t i = 0; i < sizes_[s]; ++i) {
        for (std::size_t j = 0; j < sizes_[t]; ++j) {
          if (relation.contains(request.per_slot_bids[s][i].advertiser_id,
                                request.per_slot_bids[t][j].advertiser_id)) {
            table[i * sizes_[t] + j] = 1;
            ++pair_count_;
          }
        }
      }
    }
  }
}

std::size_t ConflictTable::pair_index(std::size_t s, std::size_t t) const {
  // Row-major upper triangle without the diagonal.
  const std::size_t n = sizes_.size();
  return s * (2 * n - s - 1) / 2 + (t - s - 1);
}

bool ConflictTable::conflicts(std::size_t s, std::size_t i, std::size_t t, std::size_t j) const {
  if (s == t || pair_count_ == 0) return false;
  if (s > t) {
    std::swap(s, t);
    std::swap(i, j);
  }
  return tables_[pair_index(s, t)][i * sizes_[t] + j] != 0;
}

bool ConflictTable::row_is_competitive(const CandidateRow& row) const {
  if (pair_count_ == 0) return false;
  const std::size_t n = sizes_.size();
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = s + 1; t < n; ++t) {
      if (tables_[pair_index(s, t)][row.picks[s] * sizes_[t] + row.picks[t]]) return true;
    }
  }
  return false;
}

double rank_score(const MetricVector& x, const WeightVector& gamma) {
  double s = gamma[0] * x[0];
  for (std::size_t k = 1; k < kNumMetrics; ++k) s = s + gamma[k] * x[k];
  return s;
}

SelectionResult baseline_selection(const AuctionRequest& request, const MetricContext& ctx) {
  SelectionResult result;
  result.request_id = request.id;
  result.row.picks.resize(request.slot_count());
  for (std::size_t s = 0; s < request.slot_count(); ++s) {
    const auto& bids = request.per_slot_bids[s];
    std::size_t best = 0;
    for (std::size_t i = 1; i < bids.size(); ++i) {
      if (bids[i].bid > bids[best].bid ||
          (bids[i].bid == bids[best].bid && bids[i].advertiser_id < bids[best].advertiser_id)) {
        best = i;
      }
    }
    result.row.picks[s] = best;
  }
  result.raw_metrics = compute_metric_vector(result.row, ctx);
  result.rank_score = 0.0;
  result.is_fallback = true;
  return result;
}

namespace {

constexpr std::size_t kChunkRows = 512;

// Streams the rows of A in enumeration order through fixed-size column
// buffers. on_chunk(columns, rows_in_chunk) is called per full or final chunk.
template <typename OnChunk>
void stream_candidates(const AuctionRequest& request, const MetricContext& ctx,
                       const ConflictTable& conflicts, const EnumerationBudget& budget,
                       const ColumnExtrema& extrema, std::size_t chunk_rows, OnChunk&& on_chunk) {
  std::array<std::vector<double>, kNumMetrics> columns;
  for (auto& c : columns) c.resize(chunk_rows);
  std::vector<CandidateRow> rows;
  rows.reserve(chunk_rows);
  for (const CandidateRow& row : filter_competitive(enumerate_rows(request, budget), conflicts)) {
    const MetricVector x = normalize(compute_metric_vector(row, ctx), extrema);
    const std::size_t i = rows.size();
    for (std::size_t k = 0; k < kNumMetrics; ++k) columns[k][i] = x[k];
    rows.push_back(row);
    if (rows.size() == chunk_rows) {
      on_chunk(columns, rows);
      rows.clear();
    }
  }
  if (!rows.empty()) on_chunk(columns, rows);
}

}  // namespace

SelectionResult select_optimal(const AuctionRequest& request, const MetricContext& ctx,
                               const ConflictTable& conflicts, const WeightVector& gamma,
                               const EnumerationBudget& budget) {
  if (omega_size(request) > budget.max_rows) return baseline_selection(request, ctx);
  const ColumnExtrema extrema = column_extrema(ctx);

  bool found = false;
  double best_score = 0.0;
  CandidateRow best_row;
  stream_candidates(request, ctx, conflicts, budget, extrema, kChunkRows,
                    [&](const auto& columns, const std::vector<CandidateRow>& rows) {
                      simd::MetricColumns view;
                      for (std::size_t k = 0; k < kNumMetrics; ++k) view.column[k] = columns[k].data();
                      view.rows = rows.size();
                      const auto hit = simd::argmax_rank_score(view, gamma.gamma());
                      if (!found || hit.score > best_score) {
                        found = true;
                        best_score = hit.score;
                        best_row = rows[hit.index];
                      }
                    });
  if (!found) return baseline_selection(request, ctx);

  SelectionResult result;
  result.request_id = request.id;
  result.row = std::move(best_row);
  result.raw_metrics = compute_metric_vector(result.row, ctx);
  result.rank_score = best_score;
  result.is_fallback = false;
  return result;
}

SelectionResult select_optimal(const AuctionRequest& request, const MetricContext& ctx,
                               const CompetitorRelation& relation, const WeightVector& gamma,
                               const EnumerationBudget& budget) {
  return select_optimal(request, ctx, ConflictTable(request, relation), gamma, budget);
}

MetricVector CandidateMatrix::normalized_row(std::size_t i) const {
  MetricVector x;
  for (std::size_t k = 0; k < kNumMetrics; ++k) x[k] = normalized[k][i];
  return x;
}

MetricVector CandidateMatrix::raw_row(std::size_t i) const {
  MetricVector x;
  for (std::size_t k = 0; k < kNumMetrics; ++k) x[k] = raw[k][i];
  return x;
}

CandidateMatrix materialize_candidates(const AuctionRequest& request, const MetricContext& ctx,
                                       const ConflictTable& conflicts,
                                       const EnumerationBudget& budget) {
  CandidateMatrix m;
  m.extrema = column_extrema(ctx);
  for (const CandidateRow& row : filter_competitive(enumerate_rows(request, budget), conflicts)) {
    const MetricVector raw = compute_metric_vector(row, ctx);
    const MetricVector x = normalize(raw, m.extrema);
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      m.normalized[k].push_back(x[k]);
      m.raw[k].push_back(raw[k]);
    }
    m.rows.push_back(row);
  }
  return m;
}

}  // namespace rtbsel
