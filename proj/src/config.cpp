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

#include "rtbsel/config.hpp"

#include <fstream>
#include <iterator>

#include "json.hpp"

namespace rtbsel {

using nlohmann::json;

std::vector<double> default_sweep_values() {
  std::vector<double> v;
  for (int i = 0; i <= 20; ++i) v.push_back(-0.05 * i);
  return v;
}

namespace {

template <typename T>
void read(const json& o, const char* key, T& out) {
  auto it = o.find(key);
  if (it == o.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ParseError, std::string("config: bad value for '") + key + "'");
  }
}

void read_synthetic(const json& o, SyntheticSpec& s) {
  read(o, "webpages", s.webpages);
  read(o, "min_slots", s.min_slots);
  read(o, "max_slots", s.max_slots);
  read(o, "ads", s.ads);
  read(o, "companies", s.companies);
  read(o, "advertisers_per_company", s.advertisers_per_company);
  read(o, "bidders_per_slot", s.bidders_per_slot);
  read(o, "requests", s.requests);
  read(o, "topics", s.topics);
  read(o, "bid_log_mu", s.bid_log_mu);
  read(o, "bid_log_sigma", s.bid_log_sigma);
  read(o, "bid_strength_share", s.bid_strength_share);
  read(o, "ctr_alpha", s.ctr_alpha);
  read(o, "ctr_beta", s.ctr_beta);
  read(o, "memorability_alpha", s.memorability_alpha);
  read(o, "memorability_beta", s.memorability_beta);
  read(o, "bid_ctr_correlation", s.bid_ctr_correlation);
  read(o, "bid_contrast_correlation", s.bid_contrast_correlation);
  read(o, "topic_affinity", s.topic_affinity);
  read(o, "images", s.images);
  read(o, "page_width", s.page_width);
  read(o, "page_height", s.page_height);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json o;
  try {
    o = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
  if (!o.is_object()) throw Error(ErrorCode::ParseError, "config: expected an object");
  RunConfig c;
  if (auto it = o.find("thresholds"); it != o.end()) {
    std::vector<double> t;
    read(o, "thresholds", t);
    if (t.size() != kNumMetrics) {
      throw Error(ErrorCode::InvalidArgument, "config: thresholds needs six values");
    }
    std::array<double, kNumMetrics> a;
    std::copy(t.begin(), t.end(), a.begin());
    c.thresholds = ThresholdVector(a);
  }
  read(o, "grid_step", c.grid_step);
  read(o, "folds", c.folds);
  read(o, "seed", c.seed);
  read(o, "max_rows", c.budget.max_rows);
  if (auto it = o.find("budget"); it != o.end()) {
    if (!it->is_object()) throw Error(ErrorCode::ParseError, "config: budget must be an object");
    read(*it, "max_rows", c.budget.max_rows);
  }
  read(o, "mbd_passes", c.mbd_passes);
  read(o, "reserve_price", c.reserve_price);
  read(o, "neutral_saliency", c.neutral_saliency);
  read(o, "topic_count", c.topic_count);
  read(o, "kmeans_seed", c.kmeans_seed);
  read(o, "kmeans_max_iters", c.kmeans_max_iters);
  read(o, "sweep_values", c.sweep_values);
  read(o, "sweep_test_fraction", c.sweep_test_fraction);
  read(o, "sweep_full_cv", c.sweep_full_cv);
  read(o, "threads", c.threads);
  if (auto it = o.find("synthetic"); it != o.end()) read_synthetic(*it, c.synthetic);
  if (c.budget.max_rows < 1) throw Error(ErrorCode::InvalidArgument, "config: max_rows must be >= 1");
  if (c.folds < 2) throw Error(ErrorCode::InvalidArgument, "config: folds must be >= 2");
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open config " + path.string());
  return parse_config(std::string(std::istreambuf_iterator<char>(in), {}));
}

}  // namespace rtbsel
