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

#include "rtbsel/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <tuple>

#include "rtbsel/saliency_mbd.hpp"

namespace rtbsel {

Experiment::Experiment(const Dataset& dataset, const RunConfig& config)
    : dataset_(&dataset), config_(config) {
  validate(dataset);

  std::vector<std::vector<std::string>> corpus;
  for (const auto& page : dataset.webpages) corpus.push_back(tokenize(page.text()));
  for (const auto& ad : dataset.ads) corpus.push_back(tokenize(ad.landing_text()));
  vocab_ = build_vocabulary(corpus);

  std::vector<SparseVector> page_vec;
  for (std::size_t i = 0; i < dataset.webpages.size(); ++i) {
    page_vec.push_back(tfidf_vector(corpus[i], vocab_));
  }
  std::unordered_map<Id, SparseVector> ad_vec;
  for (std::size_t i = 0; i < dataset.ads.size(); ++i) {
    ad_vec.emplace(dataset.ads[i].id, tfidf_vector(corpus[dataset.webpages.size() + i], vocab_));
  }
  std::unordered_map<Id, std::size_t> page_index;
  for (std::size_t i = 0; i < dataset.webpages.size(); ++i) page_index[dataset.webpages[i].id] = i;

  topics_ = dataset.topics ? *dataset.topics
                           : cluster_ads(dataset.ads, vocab_, config.topic_count,
                                         config.kmeans_seed, config.kmeans_max_iters);
  relation_ = build_competitor_relation(dataset.ads, topics_);

  // Saliency of (page, slot, ad) with only that ad composited.
  std::map<std::tuple<std::size_t, std::size_t, Id>, double> saliency_cache;
  for (const auto& req : dataset.requests) {
    const std::size_t p = page_index.at(req.webpage_id);
    const Webpage& page = dataset.webpages[p];
    const AttributeLookup lookup = [&](std::size_t s, const BidEntry& bid) {
      const Ad& ad = dataset.ad(bid.ad_id);
      AdAttributes a;
      a.memorability = ad.memorability;
      a.ctr = ad.ctr;
      a.relevance = cosine_similarity(page_vec[p], ad_vec.at(ad.id));
      if (page.snapshot && ad.image) {
        auto key = std::make_tuple(p, s, ad.id);
        auto it = saliency_cache.find(key);
        if (it == saliency_cache.end()) {
          const double v = slot_saliency(*page.snapshot, *ad.image, page.slots[s].rect,
                                         config_.mbd_passes);
          it = saliency_cache.emplace(std::move(key), v).first;
        }
        a.saliency = it->second;
      } else {
        a.saliency = config_.neutral_saliency;
        ++neutral_saliency_count_;
      }
      return a;
    };
    contexts_.push_back(build_metric_context(req, config_.reserve_price, lookup));
    conflicts_.emplace_back(req, relation_);
    examples_.push_back(
        make_training_example(req, contexts_.back(), conflicts_.back(), config_.budget));
  }
}

SelectionResult Experiment::baseline(std::size_t j) const {
  return baseline_selection(request(j), contexts_[j]);
}

SelectionResult Experiment::select(std::size_t j, const WeightVector& gamma) const {
  return select_optimal(request(j), contexts_[j], conflicts_[j], gamma, config_.budget);
}

namespace {

std::size_t count_fallbacks(const Experiment& exp, std::span<const std::size_t> idx) {
  std::size_t n = 0;
  for (std::size_t j : idx) n += exp.examples()[j].fallback ? 1 : 0;
  return n;
}

ChangeReport zero_change(std::size_t n) {
  ChangeReport r;
  r.n = n;
  return r;
}

ColumnSummary summarize(const std::vector<ChangeReport>& reports) {
  ColumnSummary s;
  const double n = static_cast<double>(reports.size());
  for (std::size_t k = 0; k < kNumMetrics; ++k) {
    double sum = 0.0;
    for (const auto& r : reports) sum += r.xi[k];
    const double mean = sum / n;
    double ss = 0.0;
    for (const auto& r : reports) ss += (r.xi[k] - mean) * (r.xi[k] - mean);
    s.mean[k] = mean;
    s.stddev[k] = std::sqrt(ss / n);
  }
  return s;
}

std::vector<std::size_t> shuffled(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

}  // namespace

FoldReport run_fold(const Experiment& exp, std::span<const std::size_t> train,
                    std::span<const std::size_t> test, const ThresholdVector& thresholds) {
  if (train.empty()) throw Error(ErrorCode::EmptyTraining, "fold has no training requests");
  std::vector<std::size_t> group(exp.request_count(), GridTable::kSkip);
  for (std::size_t j : train) group.at(j) = 0;
  const GridTable table = GridTable::evaluate(exp.examples(), group, 1, exp.config().grid_step,
                                              exp.config().threads);

  FoldReport rep;
  const auto best = table.best_feasible({true}, thresholds);
  if (!best) {
    rep.train_xi = zero_change(train.size());
    rep.test_xi = zero_change(test.size());
    rep.train_fallbacks = train.size();
    rep.test_fallbacks = test.size();
    return rep;
  }
  rep.gamma = table.gamma(best->candidate);
  rep.train_xi = best->xi;
  rep.train_objective = best->objective;
  if (!test.empty()) {
    // Same accumulation order as the table, so identical splits agree bitwise.
    std::vector<std::size_t> order(test.begin(), test.end());
    std::sort(order.begin(), order.end());
    std::vector<TrainingExample> held_out;
    for (std::size_t j : order) held_out.push_back(exp.examples().at(j));
    const GammaEvaluation ev = evaluate_gamma(*rep.gamma, held_out);
    rep.test_xi = ev.xi;
    rep.test_objective = ev.objective;
  }
  rep.train_fallbacks = count_fallbacks(exp, train);
  rep.test_fallbacks = count_fallbacks(exp, test);
  return rep;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw Error(ErrorCode::InvalidArgument, "need at least two folds");
  if (n < static_cast<std::size_t>(folds)) {
    throw Error(ErrorCode::TooFewRequests,
                std::to_string(n) + " requests for " + std::to_string(folds) + " folds");
  }
  const auto perm = shuffled(n, seed);
  std::vector<std::vector<std::size_t>> out(folds);
  for (int f = 0; f < folds; ++f) {
    const std::size_t b = f * n / folds;
    const std::size_t e = (f + 1) * n / folds;
    out[f].assign(perm.begin() + b, perm.begin() + e);
  }
  return out;
}

std::vector<CrossValidation> cross_validate(const Experiment& exp,
                                            std::span<const ThresholdVector> thresholds,
                                            int folds, std::uint64_t seed) {
  const auto parts = make_folds(exp.request_count(), folds, seed);
  std::vector<std::size_t> group(exp.request_count());
  for (int f = 0; f < folds; ++f) {
    for (std::size_t j : parts[f]) group[j] = static_cast<std::size_t>(f);
  }
  const GridTable table = GridTable::evaluate(exp.examples(), group, folds,
                                              exp.config().grid_step, exp.config().threads);

  std::vector<CrossValidation> out;
  for (const auto& theta : thresholds) {
    CrossValidation cv;
    std::vector<ChangeReport> train_reports;
    std::vector<ChangeReport> test_reports;
    for (int f = 0; f < folds; ++f) {
      std::vector<bool> train_mask(folds, true);
      train_mask[f] = false;
      std::vector<bool> test_mask(folds, false);
      test_mask[f] = true;
      std::vector<std::size_t> train_idx;
      for (int g = 0; g < folds; ++g) {
        if (g != f) train_idx.insert(train_idx.end(), parts[g].begin(), parts[g].end());
      }

      FoldReport rep;
      rep.fold = f + 1;
      const auto best = table.best_feasible(train_mask, theta);
      if (best) {
        rep.gamma = table.gamma(best->candidate);
        rep.train_xi = best->xi;
        rep.train_objective = best->objective;
        rep.test_xi = table.change(best->candidate, test_mask);
        rep.test_objective = table.objective(best->candidate, test_mask);
        rep.train_fallbacks = count_fallbacks(exp, train_idx);
        rep.test_fallbacks = count_fallbacks(exp, parts[f]);
      } else {
        rep.train_xi = zero_change(train_idx.size());
        rep.test_xi = zero_change(parts[f].size());
        rep.train_fallbacks = train_idx.size();
        rep.test_fallbacks = parts[f].size();
      }
      train_reports.push_back(rep.train_xi);
      test_reports.push_back(rep.test_xi);
      cv.folds.push_back(std::move(rep));
    }
    cv.train = summarize(train_reports);
    cv.test = summarize(test_reports);
    out.push_back(std::move(cv));
  }
  return out;
}

CrossValidation cross_validate(const Experiment& exp, const ThresholdVector& thresholds, int folds,
                               std::uint64_t seed) {
  return std::move(cross_validate(exp, std::span(&thresholds, 1), folds, seed).front());
}

std::vector<SweepPoint> sweep_theta1(const Experiment& exp, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] <= 0.0) || (i > 0 && !(values[i] < values[i - 1]))) {
      throw Error(ErrorCode::InvalidArgument,
                  "sweep values must be non-positive and strictly descending");
    }
  }
  std::vector<ThresholdVector> thresholds;
  for (double v : values) thresholds.push_back(ThresholdVector::revenue_only(v));
  const RunConfig& cfg = exp.config();
  std::vector<SweepPoint> points;

  if (cfg.sweep_full_cv) {
    const auto runs = cross_validate(exp, thresholds, cfg.folds, cfg.seed);
    for (std::size_t i = 0; i < values.size(); ++i) {
      SweepPoint pt;
      pt.theta1 = values[i];
      const auto& cv = runs[i];
      pt.feasible = std::all_of(cv.folds.begin(), cv.folds.end(),
                                [](const FoldReport& r) { return r.gamma.has_value(); });
      for (const auto& f : cv.folds) {
        pt.train_objective += f.train_objective;
        pt.test_objective += f.test_objective;
      }
      pt.train_xi.xi = cv.train.mean;
      pt.test_xi.xi = cv.test.mean;
      pt.train_xi.n = pt.test_xi.n = exp.request_count();
      points.push_back(pt);
    }
    return points;
  }

  const std::size_t n = exp.request_count();
  if (n < 2) throw Error(ErrorCode::TooFewRequests, "sweep needs at least two requests");
  const auto perm = shuffled(n, cfg.seed);
  const std::size_t n_test = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(cfg.sweep_test_fraction * static_cast<double>(n))), 1,
      n - 1);
  std::vector<std::size_t> group(n, 0);
  for (std::size_t i = 0; i < n_test; ++i) group[perm[i]] = 1;
  const GridTable table =
      GridTable::evaluate(exp.examples(), group, 2, cfg.grid_step, cfg.threads);
  const std::vector<bool> train_mask{true, false};
  const std::vector<bool> test_mask{false, true};
  for (std::size_t i = 0; i < values.size(); ++i) {
    SweepPoint pt;
    pt.theta1 = values[i];
    const auto best = table.best_feasible(train_mask, thresholds[i]);
    if (best) {
      pt.feasible = true;
      pt.gamma = table.gamma(best->candidate);
      pt.train_objective = best->objective;
      pt.train_xi = best->xi;
      pt.test_objective = table.objective(best->candidate, test_mask);
      pt.test_xi = table.change(best->candidate, test_mask);
    } else {
      pt.train_xi = zero_change(n - n_test);
      pt.test_xi = zero_change(n_test);
    }
    points.push_back(pt);
  }
  return points;
}

}  // namespace rtbsel
