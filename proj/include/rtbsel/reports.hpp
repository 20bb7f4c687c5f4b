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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "rtbsel/dataset.hpp"
#include "rtbsel/experiment.hpp"

namespace rtbsel {

// Requests showing each multi-slot placement scenario among the baseline
// (highest-bid) ads. Scenarios overlap.
struct ScenarioCounts {
  std::size_t requests = 0;
  std::size_t same_landing_page = 0;
  std::size_t same_company = 0;
  std::size_t competitive = 0;

  bool operator==(const ScenarioCounts&) const = default;
};

struct ScenarioStats {
  ScenarioCounts total;  // all requests with two or more slots
  // Requests with exactly 2, exactly 3, and 4 or more slots.
  std::array<ScenarioCounts, 3> by_slots{};
};

// Two ads share a landing page when they are the same ad or carry the same
// domain and identical landing title, keywords and description.
bool same_landing_page(const Ad& a, const Ad& b);

ScenarioStats scenario_stats(const Dataset& dataset, const CompetitorRelation& relation);

// Equal-width bins over [lo, hi]; values at hi land in the last bin and
// values outside are clamped into the end bins.
std::vector<std::size_t> histogram(std::span<const double> values, int bins, double lo = 0.0,
                                   double hi = 1.0);

struct MetricHistograms {
  int bins = 0;
  std::size_t pairs = 0;
  std::vector<std::size_t> memorability;
  std::vector<std::size_t> relevance;
  std::vector<std::size_t> saliency;
};

// Over every distinct (webpage, slot, candidate ad) triple in the requests.
MetricHistograms metric_histograms(const Experiment& exp, int bins);

void write_fold_report_csv(std::ostream& out, const CrossValidation& cv);
// Percentages in the layout of a per-fold trade-off table.
void write_fold_table(std::ostream& out, const CrossValidation& cv);
void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points);
void write_scenario_stats(std::ostream& out, const ScenarioStats& stats);
void write_histograms_csv(std::ostream& out, const MetricHistograms& h);

}  // namespace rtbsel
