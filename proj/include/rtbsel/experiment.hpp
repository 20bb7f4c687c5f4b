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

// Auction simulation over a dataset: per-request metric tables, training
// caches, fold runs, cross-validation and threshold sweeps.

#include <optional>
#include <span>
#include <vector>

#include "rtbsel/config.hpp"
#include "rtbsel/dataset.hpp"
#include "rtbsel/metrics.hpp"
#include "rtbsel/selection.hpp"
#include "rtbsel/weights_opt.hpp"

namespace rtbsel {

// Immutable per-dataset state shared by every fold and sweep point.
class Experiment {
 public:
  Experiment(const Dataset& dataset, const RunConfig& config);

  const Dataset& dataset() const { return *dataset_; }
  const RunConfig& config() const { return config_; }
  const Vocabulary& vocabulary() const { return vocab_; }
  const TopicAssignment& topics() const { return topics_; }
  const CompetitorRelation& relation() const { return relation_; }

  std::size_t request_count() const { return dataset_->requests.size(); }
  const AuctionRequest& request(std::size_t j) const { return dataset_->requests[j]; }
  const MetricContext& context(std::size_t j) const { return contexts_[j]; }
  const ConflictTable& conflicts(std::size_t j) const { return conflicts_[j]; }
  const std::vector<TrainingExample>& examples() const { return examples_; }

  SelectionResult baseline(std::size_t j) const;
  SelectionResult select(std::size_t j, const WeightVector& gamma) const;

  // Bidder slots scored with the neutral saliency because an image was missing.
  std::size_t neutral_saliency_count() const { return neutral_saliency_count_; }

 private:
  const Dataset* dataset_;
  RunConfig config_;
  Vocabulary vocab_;
  TopicAssignment topics_;
  CompetitorRelation relation_;
  std::vector<MetricContext> contexts_;
  std::vector<ConflictTable> conflicts_;
  std::vector<TrainingExample> examples_;
  std::size_t neutral_saliency_count_ = 0;
};

struct FoldReport {
  int fold = 0;
  std::optional<WeightVector> gamma;  // absent when training was infeasible
  ChangeReport train_xi;
  ChangeReport test_xi;
  double train_objective = 0.0;
  double test_objective = 0.0;
  std::size_t train_fallbacks = 0;
  std::size_t test_fallbacks = 0;
};

// Trains on train, applies the weights to both splits (which may overlap).
// Infeasible training selects the baseline everywhere.
FoldReport run_fold(const Experiment& exp, std::span<const std::size_t> train,
                    std::span<const std::size_t> test, const ThresholdVector& thresholds);

struct ColumnSummary {
  std::array<double, kNumMetrics> mean{};
  std::array<double, kNumMetrics> stddev{};  // population
};

struct CrossValidation {
  std::vector<FoldReport> folds;
  ColumnSummary train;
  ColumnSummary test;
};

// Seeded shuffle then contiguous split: fold f holds shuffled positions
// [f * n / folds, (f + 1) * n / folds).
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int folds, std::uint64_t seed);

CrossValidation cross_validate(const Experiment& exp, const ThresholdVector& thresholds, int folds,
                               std::uint64_t seed);
// One grid evaluation shared by several threshold settings.
std::vector<CrossValidation> cross_validate(const Experiment& exp,
                                            std::span<const ThresholdVector> thresholds,
                                            int folds, std::uint64_t seed);

struct SweepPoint {
  double theta1 = 0.0;
  bool feasible = false;
  std::optional<WeightVector> gamma;
  double train_objective = 0.0;
  double test_objective = 0.0;
  ChangeReport train_xi;
  ChangeReport test_xi;
};

// theta_2..6 = 0. Uses a fixed seeded split with config.sweep_test_fraction
// held out, or full cross-validation (mean test xi, summed test objective)
// when config.sweep_full_cv is set.
std::vector<SweepPoint> sweep_theta1(const Experiment& exp, std::span<const double> theta1_values);

}  // namespace rtbsel
