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

#include "rtbsel/weights_opt.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "rtbsel/simd/kernels.hpp"

namespace rtbsel {

TrainingExample make_training_example(const AuctionRequest& request, const MetricContext& ctx,
                                      const ConflictTable& conflicts,
                                      const EnumerationBudget& budget) {
  TrainingExample ex;
  ex.request_id = request.id;
  ex.baseline_raw = baseline_selection(request, ctx).raw_metrics;
  if (omega_size(request) > budget.max_rows) {
    ex.fallback = true;
    ex.candidates.extrema = column_extrema(ctx);
    return ex;
  }
  ex.candidates = materialize_candidates(request, ctx, conflicts, budget);
  ex.fallback = ex.candidates.size() == 0;
  return ex;
}

ChangeReport change_report(const MetricVector& selected_sum, const MetricVector& baseline_sum,
                           std::size_t n) {
  ChangeReport r;
  r.n = n;
  for (std::size_t k = 0; k < kNumMetrics; ++k) {
    const double num = selected_sum[k] - baseline_sum[k];
    if (baseline_sum[k] == 0.0) {
      r.xi[k] = 0.0;
      r.defined[k] = num == 0.0;
    } else {
      r.xi[k] = num / baseline_sum[k];
      r.defined[k] = true;
    }
  }
  return r;
}

ChangeReport xi_changes(std::span<const SelectionResult> optimized,
                        std::span<const SelectionResult> baseline) {
  if (optimized.size() != baseline.size() || optimized.empty()) {
    throw Error(ErrorCode::InvalidArgument, "change report needs aligned, non-empty lists");
  }
  MetricVector sel;
  MetricVector base;
  for (std::size_t j = 0; j < optimized.size(); ++j) {
    if (optimized[j].request_id != baseline[j].request_id) {
      throw Error(ErrorCode::InvalidArgument, "request ids are not aligned at position " +
                                                  std::to_string(j));
    }
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      sel[k] = sel[k] + optimized[j].raw_metrics[k];
      base[k] = base[k] + baseline[j].raw_metrics[k];
    }
  }
  return change_report(sel, base, optimized.size());
}

bool satisfies_thresholds(const ChangeReport& report, const ThresholdVector& thresholds) {
  for (std::size_t k = 0; k < kNumMetrics; ++k) {
    if (!report.defined[k]) continue;
    if (!(report.xi[k] >= thresholds[k])) return false;
  }
  return true;
}

int grid_divisions(double step) {
  if (!(step > 0.0 && step <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid step must lie in (0, 1]");
  }
  const double m = std::round(1.0 / step);
  if (std::abs(m * step - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument, "1 / grid step must be an integer");
  }
  return static_cast<int>(m);
}

std::vector<WeightVector> enumerate_simplex(double step) {
  const int m = grid_divisions(step);
  std::vector<WeightVector> out;
  std::array<int, kNumMetrics> c{};
  // Lexicographic over (c0..c4) with c5 taking the remainder.
  auto emit = [&] {
    std::array<double, kNumMetrics> g;
    for (std::size_t k = 0; k < kNumMetrics; ++k) g[k] = static_cast<double>(c[k]) / m;
    out.emplace_back(g);
  };
  for (c[0] = 0; c[0] <= m; ++c[0])
    for (c[1] = 0; c[1] <= m - c[0]; ++c[1])
      for (c[2] = 0; c[2] <= m - c[0] - c[1]; ++c[2])
        for (c[3] = 0; c[3] <= m - c[0] - c[1] - c[2]; ++c[3])
          for (c[4] = 0; c[4] <= m - c[0] - c[1] - c[2] - c[3]; ++c[4]) {
            c[5] = m - c[0] - c[1] - c[2] - c[3] - c[4];
            emit();
          }
  return out;
}

namespace {

simd::MetricColumns columns_of(const CandidateMatrix& m) {
  simd::MetricColumns view;
  for (std::size_t k = 0; k < kNumMetrics; ++k) view.column[k] = m.normalized[k].data();
  view.rows = m.size();
  return view;
}

// Adds the selection of one example under gamma to (objective, sums).
inline void accumulate(const TrainingExample& ex, const std::array<double, kNumMetrics>& gamma,
                       double& objective, double* sums) {
  if (ex.fallback) {
    for (std::size_t k = 0; k < kNumMetrics; ++k) sums[k] = sums[k] + ex.baseline_raw[k];
    return;
  }
  const auto hit = simd::argmax_rank_score(columns_of(ex.candidates), gamma);
  objective = objective + hit.score;
  for (std::size_t k = 0; k < kNumMetrics; ++k) {
    sums[k] = sums[k] + ex.candidates.raw[k][hit.index];
  }
}

}  // namespace

GammaEvaluation evaluate_gamma(const WeightVector& gamma,
                               std::span<const TrainingExample> training) {
  GammaEvaluation ev;
  for (const auto& ex : training) {
    accumulate(ex, gamma.gamma(), ev.objective, ev.selected_sum.x.data());
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      ev.baseline_sum[k] = ev.baseline_sum[k] + ex.baseline_raw[k];
    }
  }
  ev.xi = change_report(ev.selected_sum, ev.baseline_sum, training.size());
  return ev;
}

GridTable GridTable::evaluate(std::span<const TrainingExample> examples,
                              std::span<const std::size_t> group_of, std::size_t groups,
                              double step, unsigned threads) {
  if (group_of.size() != examples.size()) {
    throw Error(ErrorCode::InvalidArgument, "group labels do not match examples");
  }
  GridTable t;
  t.gammas_ = enumerate_simplex(step);
  t.groups_ = groups;
  t.baseline_sums_.assign(groups, MetricVector{});
  t.group_sizes_.assign(groups, 0);
  for (std::size_t j = 0; j < examples.size(); ++j) {
    const std::size_t g = group_of[j];
    if (g == kSkip) continue;
    if (g >= groups) throw Error(ErrorCode::InvalidArgument, "group label out of range");
    ++t.group_sizes_[g];
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      t.baseline_sums_[g][k] = t.baseline_sums_[g][k] + examples[j].baseline_raw[k];
    }
  }
  const std::size_t candidates = t.gammas_.size();
  t.totals_.assign(candidates * groups * kStride, 0.0);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t c = begin; c < end; ++c) {
      const auto& gamma = t.gammas_[c].gamma();
      double* row = t.totals_.data() + c * groups * kStride;
      for (std::size_t j = 0; j < examples.size(); ++j) {
        if (group_of[j] == kSkip) continue;
        double* cell = row + group_of[j] * kStride;
        accumulate(examples[j], gamma, cell[0], cell + 1);
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, candidates));
  if (threads <= 1) {
    work(0, candidates);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (candidates + threads - 1) / threads;
    for (unsigned i = 0; i < threads; ++i) {
      const std::size_t b = i * chunk;
      const std::size_t e = std::min(candidates, b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  return t;
}

double GridTable::objective(std::size_t c, const std::vector<bool>& include) const {
  double s = 0.0;
  const double* row = totals_.data() + c * groups_ * kStride;
  for (std::size_t g = 0; g < groups_; ++g) {
    if (include[g]) s = s + row[g * kStride];
  }
  return s;
}

ChangeReport GridTable::change(std::size_t c, const std::vector<bool>& include) const {
  MetricVector sel;
  MetricVector base;
  const double* row = totals_.data() + c * groups_ * kStride;
  for (std::size_t g = 0; g < groups_; ++g) {
    if (!include[g]) continue;
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      sel[k] = sel[k] + row[g * kStride + 1 + k];
      base[k] = base[k] + baseline_sums_[g][k];
    }
  }
  return change_report(sel, base, example_count(include));
}

std::size_t GridTable::example_count(const std::vector<bool>& include) const {
  std::size_t n = 0;
  for (std::size_t g = 0; g < groups_; ++g) {
    if (include[g]) n += group_sizes_[g];
  }
  return n;
}

std::optional<GridTable::Best> GridTable::best_feasible(const std::vector<bool>& include,
                                                        const ThresholdVector& thresholds) const {
  if (include.size() != groups_) {
    throw Error(ErrorCode::InvalidArgument, "group mask has the wrong length");
  }
  std::optional<Best> best;
  for (std::size_t c = 0; c < gammas_.size(); ++c) {
    const double obj = objective(c, include);
    if (best && !(obj > best->objective)) continue;
    ChangeReport xi = change(c, include);
    if (!satisfies_thresholds(xi, thresholds)) continue;
    best = Best{c, obj, xi};
  }
  return best;
}

std::optional<WeightVector> grid_search_weights(std::span<const TrainingExample> training,
                                                const WeightSearchConfig& config) {
  if (training.empty()) throw Error(ErrorCode::EmptyTraining, "no training requests");
  const std::vector<std::size_t> groups(training.size(), 0);
  const GridTable table = GridTable::evaluate(training, groups, 1, config.grid_step);
  const auto best = table.best_feasible({true}, config.thresholds);
  if (!best) return std::nullopt;
  return table.gamma(best->candidate);
}

}  // namespace rtbsel
