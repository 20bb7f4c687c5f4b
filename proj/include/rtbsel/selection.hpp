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

#include <cstdint>
#include <iterator>
#include <memory>
#include <ranges>
#include <vector>

#include "rtbsel/core_model.hpp"
#include "rtbsel/metrics.hpp"
#include "rtbsel/text_topics.hpp"

namespace rtbsel {

struct EnumerationBudget {
  std::uint64_t max_rows = 10'000'000;
};

// Number of rows of the cartesian product of the slot bid lists; saturates
// at UINT64_MAX.
std::uint64_t omega_size(const AuctionRequest& request);

// Lazy mixed-radix enumeration of the cartesian product, last slot fastest.
class OmegaView : public std::ranges::view_interface<OmegaView> {
 public:
  class iterator {
   public:
    using value_type = CandidateRow;
    using difference_type = std::ptrdiff_t;
    using iterator_concept = std::forward_iterator_tag;

    iterator() = default;
    iterator(std::shared_ptr<const std::vector<std::size_t>> radices, bool at_end);

    const CandidateRow& operator*() const { return row_; }
    const CandidateRow* operator->() const { return &row_; }
    iterator& operator++();
    iterator operator++(int) {
      iterator tmp = *this;
      ++*this;
      return tmp;
    }
    // Position of the current row in enumeration order.
    std::uint64_t ordinal() const { return ordinal_; }

    bool operator==(const iterator& o) const { return done_ == o.done_ && ordinal_ == o.ordinal_; }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    std::shared_ptr<const std::vector<std::size_t>> radices_;
    CandidateRow row_;
    std::uint64_t ordinal_ = 0;
    bool done_ = true;
  };

  OmegaView() = default;
  explicit OmegaView(std::vector<std::size_t> radices);

  iterator begin() const { return iterator(radices_, false); }
  std::default_sentinel_t end() const { return {}; }

 private:
  std::shared_ptr<const std::vector<std::size_t>> radices_ =
      std::make_shared<const std::vector<std::size_t>>();
};

// Throws BudgetExceeded when omega_size(request) > budget.max_rows.
OmegaView enumerate_rows(const AuctionRequest& request, const EnumerationBudget& budget = {});

// Competitor pairs of one request, indexed by (slot, bid) positions.
class ConflictTable {
 public:
  ConflictTable() = default;
  ConflictTable(const AuctionRequest& request, const CompetitorRelation& relation);

  bool conflicts(std::size_t s, std::size_t i, std::size_t t, std::size_t j) const;
  bool row_is_competitive(const CandidateRow& row) const;
  bool empty() const { return pair_count_ == 0; }

 private:
  std::size_t pair_index(std::size_t s, std::size_t t) const;

  std::vector<std::size_t> sizes_;
  // One flattened sizes_[s] x sizes_[t] table per slot pair s < t.
  std::vector<std::vector<char>> tables_;
  std::size_t pair_count_ = 0;
};

// Rows of A: the input rows without any competitor pair, order preserved.
template <std::ranges::viewable_range R>
auto filter_competitive(R&& rows, const ConflictTable& conflicts) {
  return std::forward<R>(rows) | std::views::filter([table = &conflicts](const CandidateRow& row) {
           return !table->row_is_competitive(row);
         });
}

// gamma^T x, summed in metric order.
double rank_score(const MetricVector& normalized, const WeightVector& gamma);

// Per-slot highest bid (ties by advertiser id ascending). Always flagged as
// fallback and carries a rank score of 0.
SelectionResult baseline_selection(const AuctionRequest& request, const MetricContext& ctx);

// Highest rank score over A, earliest row on ties. Falls back to the
// baseline when A is empty or the product exceeds the budget.
SelectionResult select_optimal(const AuctionRequest& request, const MetricContext& ctx,
                               const ConflictTable& conflicts, const WeightVector& gamma,
                               const EnumerationBudget& budget = {});
SelectionResult select_optimal(const AuctionRequest& request, const MetricContext& ctx,
                               const CompetitorRelation& relation, const WeightVector& gamma,
                               const EnumerationBudget& budget = {});

// Rows of A with their normalized and raw metric columns, materialized in
// enumeration order.
struct CandidateMatrix {
  std::vector<CandidateRow> rows;
  std::array<std::vector<double>, kNumMetrics> normalized;
  std::array<std::vector<double>, kNumMetrics> raw;
  ColumnExtrema extrema;

  std::size_t size() const { return rows.size(); }
  MetricVector normalized_row(std::size_t i) const;
  MetricVector raw_row(std::size_t i) const;
};

CandidateMatrix materialize_candidates(const AuctionRequest& request, const MetricContext& ctx,
                                       const ConflictTable& conflicts,
                                       const EnumerationBudget& budget = {});

}  // namespace rtbsel
