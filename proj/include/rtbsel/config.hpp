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
#include <filesystem>
#include <string>
#include <vector>

#include "rtbsel/core_model.hpp"
#include "rtbsel/saliency_mbd.hpp"
#include "rtbsel/selection.hpp"
#include "rtbsel/synthetic.hpp"
#include "rtbsel/text_topics.hpp"

namespace rtbsel {

// Everything a run needs besides the dataset. Read from a JSON object whose
// keys mirror the field names; missing keys keep their defaults.
struct RunConfig {
  ThresholdVector thresholds = ThresholdVector::revenue_only(-0.05);
  double grid_step = 0.05;
  int folds = 10;
  std::uint64_t seed = 1;
  EnumerationBudget budget;
  int mbd_passes = kDefaultMbdPasses;
  double reserve_price = 0.0;
  double neutral_saliency = kNeutralSaliency;
  int topic_count = kDefaultTopicCount;
  std::uint64_t kmeans_seed = 7;
  int kmeans_max_iters = 100;
  // theta_1 values for sweeps, descending from 0.
  std::vector<double> sweep_values;
  double sweep_test_fraction = 0.1;
  bool sweep_full_cv = false;
  unsigned threads = 0;
  SyntheticSpec synthetic;
};

// 0, -0.05, ..., -1.0.
std::vector<double> default_sweep_values();

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace rtbsel
