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

// Trade-off weight search. Candidate weights come from a regular grid on the
// 6-simplex; each candidate re-selects the best row of every training
// request, and the best candidate whose relative metric changes respect the
// thresholds wins.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rtbsel/core_model.hpp"
#include "rtbsel/metrics.hpp"
#include "rtbsel/selection.hpp"

namespace rtbsel {

// Cached per-request data: the rows of A as metric columns plus the baseline.
struct TrainingExample {
  Id request_id;
  CandidateMatrix candidates;
  MetricVector baseline_raw;
  // True when A is empty or the product exceeded the budget.
  bool fallback = false;
};

TrainingExample make_training_example(const AuctionRequest& request, const MetricContext& ctx,
                                      const ConflictTable& conflicts,
                                      const EnumerationBudget& budget = {});

struct WeightSearchConfig {
  double grid_step = 0.05;
  ThresholdVector thresholds;
};

// Relative change of summed raw metrics against the baseline sums.
ChangeReport change_report(const MetricVector& selected_sum, const MetricVector& baseline_sum,
                           std::size_t n);

// Requests are matched by position and must carry the same ids.
ChangeReport xi_changes(std::span<const SelectionResult> optimized,
                        std::span<const SelectionResult> baseline);

// xi_1 >= theta_1 and xi_k >= theta_k for k >= 2; undefined metrics are skipped.
bool satisfies_thresholds(const ChangeReport& report, const ThresholdVector& thresholds);

// Number of grid divisions m = 1 / step; throws InvalidArgument unless integral.
int grid_divisions(double step);

// All weight vectors with components in multiples of step, lexicographic.
std::vector<WeightVector> enumerate_simplex(double step);

struct GammaEvaluation {
  double objective = 0.0;
  ChangeReport xi;
  MetricVector selected_sum;
  MetricVector baseline_sum;
};

// Selects the best row of every example under gamma. The objective sums the
// rank scores of the selections; fallback requests contribute 0.
GammaEvaluation evaluate_gamma(const WeightVector& gamma, std::span<const TrainingExample> training);

// Per-candidate selection totals for every example group, so that any union
// of groups can be scored without re-running selection.
class GridTable {
 public:
  struct Best {
    std::size_t candidate = 0;
    double objective = 0.0;
    ChangeReport xi;
  };

  // Examples labelled kSkip take no part.
  static constexpr std::size_t kSkip = static_cast<std::size_t>(-1);

  // group_of[j] in [0, groups) or kSkip for every example j.
  static GridTable evaluate(std::span<const TrainingExample> examples,
                            std::span<const std::size_t> group_of, std::size_t groups,
                            double step, unsigned threads = 0);

  std::size_t candidate_count() const { return gammas_.size(); }
  std::size_t group_count() const { return groups_; }
  const WeightVector& gamma(std::size_t c) const { return gammas_[c]; }

  // include[g] selects the groups forming the evaluation set.
  double objective(std::size_t c, const std::vector<bool>& include) const;
  ChangeReport change(std::size_t c, const std::vector<bool>& include) const;
  std::size_t example_count(const std::vector<bool>& include) const;

  // Highest objective among feasible candidates, smallest index on ties.
  std::optional<Best> best_feasible(const std::vector<bool>& include,
                                    const ThresholdVector& thresholds) const;

 private:
  static constexpr std::size_t kStride = 1 + kNumMetrics;

  std::vector<WeightVector> gammas_;
  std::size_t groups_ = 0;
  // [candidate][group] -> objective, then six selected raw sums.
  std::vector<double> totals_;
  std::vector<MetricVector> baseline_sums_;
  std::vector<std::size_t> group_sizes_;
};

// Best feasible grid weight on the training set, or nullopt when none is
// feasible. Throws EmptyTraining on an empty set.
std::optional<WeightVector> grid_search_weights(std::span<const TrainingExample> training,
                                                const WeightSearchConfig& config);

}  // namespace rtbsel
