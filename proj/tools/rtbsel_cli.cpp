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

// Command-line front end. Exit status: 0 success, 2 invalid input, 1 other
// failures.

#include <array>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtbsel/config.hpp"
#include "rtbsel/dataset.hpp"
#include "rtbsel/error.hpp"
#include "rtbsel/experiment.hpp"
#include "rtbsel/reports.hpp"
#include "rtbsel/simd/kernels.hpp"
#include "rtbsel/synthetic.hpp"
#include "rtbsel/weights_opt.hpp"

namespace fs = std::filesystem;
using namespace rtbsel;

namespace {

struct Options {
  std::string data = ".";
  std::string config;
  std::string out;
  std::string table;
  std::string gamma_file;
  std::vector<double> gamma;
  std::optional<double> theta1;
  std::optional<std::uint64_t> seed;
  std::optional<int> folds;
  int bins = 10;
  bool scalar = false;
};

RunConfig make_config(const Options& o) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : load_config(o.config);
  if (o.theta1) {
    auto theta = cfg.thresholds.theta();
    theta[0] = *o.theta1;
    cfg.thresholds = ThresholdVector(theta);
  }
  if (o.seed) cfg.seed = *o.seed;
  if (o.folds) cfg.folds = *o.folds;
  return cfg;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::string format_xi(const ChangeReport& r) {
  std::ostringstream s;
  for (std::size_t k = 0; k < kNumMetrics; ++k) {
    char buf[64];
    if (r.defined[k]) {
      std::snprintf(buf, sizeof buf, "%s%s=%+.4f", k ? " " : "", metric_name(k).data(), r.xi[k]);
    } else {
      std::snprintf(buf, sizeof buf, "%s%s=undefined", k ? " " : "", metric_name(k).data());
    }
    s << buf;
  }
  return s.str();
}

nlohmann::json gamma_json(const WeightVector& g) {
  return nlohmann::json{{"gamma", g.gamma()}};
}

WeightVector read_gamma(const Options& o) {
  std::array<double, kNumMetrics> g{};
  if (!o.gamma_file.empty()) {
    std::ifstream in(o.gamma_file);
    if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + o.gamma_file);
    nlohmann::json j;
    try {
      in >> j;
      g = j.at("gamma").get<std::array<double, kNumMetrics>>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, o.gamma_file + ": " + e.what());
    }
  } else {
    if (o.gamma.size() != kNumMetrics) {
      throw Error(ErrorCode::InvalidArgument, "--gamma needs six comma-separated weights");
    }
    std::copy(o.gamma.begin(), o.gamma.end(), g.begin());
  }
  return WeightVector(g);
}

int cmd_ingest(const Options& o) {
  const Dataset d = load_dataset(o.data);
  std::size_t slots = 0;
  for (const auto& r : d.requests) slots += r.slot_count();
  std::cout << "webpages " << d.webpages.size() << "\nads " << d.ads.size() << "\nrequests "
            << d.requests.size() << "\nslots " << slots << "\ntopics "
            << (d.topics ? "loaded" : "absent") << '\n';
  return 0;
}

int cmd_synth(const Options& o) {
  const RunConfig cfg = make_config(o);
  const fs::path out = o.out.empty() ? fs::path("synthetic") : fs::path(o.out);
  const Dataset d = generate_synthetic(cfg.synthetic, cfg.seed);
  save_dataset(d, out);
  std::cout << "wrote " << d.requests.size() << " requests to " << out.string() << '\n';
  return 0;
}

int cmd_topics(const Options& o) {
  const RunConfig cfg = make_config(o);
  Dataset d = load_dataset(o.data);
  d.topics.reset();  // always recluster
  const Experiment exp(d, cfg);
  const fs::path out = o.out.empty() ? fs::path(o.data) / "topics.jsonl" : fs::path(o.out);
  save_topics(exp.topics(), d.ads, out);
  std::cout << "topics " << exp.topics().centroids.size() << "\ncompetitor_pairs "
            << exp.relation().size() << '\n';
  return 0;
}

int cmd_simulate(const Options& o) {
  const RunConfig cfg = make_config(o);
  const Dataset d = load_dataset(o.data);
  const Experiment exp(d, cfg);
  const WeightVector gamma = read_gamma(o);
  std::vector<SelectionResult> chosen, base;
  std::size_t fallbacks = 0;
  double objective = 0.0;
  for (std::size_t j = 0; j < exp.request_count(); ++j) {
    chosen.push_back(exp.select(j, gamma));
    base.push_back(exp.baseline(j));
    fallbacks += chosen.back().is_fallback;
    objective += chosen.back().rank_score;
  }
  if (!o.out.empty()) {
    auto out = open_output(o.out);
    out << "request_id,fallback,rank_score,ads\n";
    for (const auto& s : chosen) {
      const auto& req = d.requests[&s - chosen.data()];
      out << s.request_id << ',' << (s.is_fallback ? 1 : 0) << ',' << s.rank_score << ',';
      for (std::size_t k = 0; k < s.row.picks.size(); ++k) {
        out << (k ? ";" : "") << req.per_slot_bids[k][s.row.picks[k]].ad_id;
      }
      out << '\n';
    }
  }
  std::cout << "requests " << chosen.size() << "\nfallbacks " << fallbacks << "\nobjective "
            << objective << "\nxi " << format_xi(xi_changes(chosen, base)) << '\n';
  return 0;
}

int cmd_train(const Options& o) {
  const RunConfig cfg = make_config(o);
  const Dataset d = load_dataset(o.data);
  const Experiment exp(d, cfg);
  const std::vector<std::size_t> group(exp.examples().size(), 0);
  const auto table = GridTable::evaluate(exp.examples(), group, 1, cfg.grid_step, cfg.threads);
  const auto best = table.best_feasible({true}, cfg.thresholds);
  if (!best) {
    std::cout << "infeasible: no grid weight satisfies the thresholds\n";
    return 0;
  }
  const WeightVector& g = table.gamma(best->candidate);
  const fs::path out = o.out.empty() ? fs::path("gamma.json") : fs::path(o.out);
  auto json = gamma_json(g);
  json["objective"] = best->objective;
  json["xi"] = best->xi.xi;
  auto file = open_output(out.string());
  file << json.dump(2) << '\n';
  std::cout << "objective " << best->objective << "\nxi " << format_xi(best->xi) << '\n';
  return 0;
}

int cmd_cv(const Options& o) {
  const RunConfig cfg = make_config(o);
  const Dataset d = load_dataset(o.data);
  const Experiment exp(d, cfg);
  const CrossValidation cv = cross_validate(exp, cfg.thresholds, cfg.folds, cfg.seed);
  auto csv = open_output(o.out.empty() ? "fold_report.csv" : o.out);
  write_fold_report_csv(csv, cv);
  if (!o.table.empty()) {
    auto table = open_output(o.table);
    write_fold_table(table, cv);
  }
  write_fold_table(std::cout, cv);
  return 0;
}

int cmd_sweep(const Options& o) {
  RunConfig cfg = make_config(o);
  if (cfg.sweep_values.empty()) cfg.sweep_values = default_sweep_values();
  const Dataset d = load_dataset(o.data);
  const Experiment exp(d, cfg);
  const auto points = sweep_theta1(exp, cfg.sweep_values);
  auto csv = open_output(o.out.empty() ? "sweep.csv" : o.out);
  write_sweep_csv(csv, points);
  std::size_t feasible = 0;
  for (const auto& p : points) feasible += p.feasible;
  std::cout << "points " << points.size() << "\nfeasible " << feasible << '\n';
  return 0;
}

int cmd_stats(const Options& o) {
  const RunConfig cfg = make_config(o);
  const Dataset d = load_dataset(o.data);
  const Experiment exp(d, cfg);
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  const ScenarioStats stats = scenario_stats(d, exp.relation());
  auto scenarios = open_output((dir / "scenarios.csv").string());
  write_scenario_stats(scenarios, stats);
  auto histograms = open_output((dir / "histograms.csv").string());
  write_histograms_csv(histograms, metric_histograms(exp, o.bins));
  write_scenario_stats(std::cout, stats);
  if (exp.neutral_saliency_count() > 0) {
    std::cout << "neutral_saliency_slots " << exp.neutral_saliency_count() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-slot ad selection simulator"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--scalar", o.scalar, "Disable vector kernels");

  auto with_data = [&](CLI::App* c) {
    c->add_option("-d,--data", o.data, "Dataset directory")->capture_default_str();
    c->add_option("-c,--config", o.config, "JSON run configuration");
    c->add_option("--theta1", o.theta1, "Revenue change bound (<= 0)");
  };

  auto* ingest = app.add_subcommand("ingest", "Load and validate a dataset");
  ingest->add_option("-d,--data", o.data, "Dataset directory")->capture_default_str();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset");
  synth->add_option("-c,--config", o.config, "JSON run configuration");
  synth->add_option("--seed", o.seed, "Generator seed");
  synth->add_option("-o,--out", o.out, "Output directory");

  auto* topics = app.add_subcommand("topics", "Cluster ads and write topics.jsonl");
  with_data(topics);
  topics->add_option("-o,--out", o.out, "Output file (default <data>/topics.jsonl)");

  auto* simulate = app.add_subcommand("simulate", "Run every auction under fixed weights");
  with_data(simulate);
  simulate->add_option("--gamma", o.gamma, "Six weights")->delimiter(',');
  simulate->add_option("--gamma-file", o.gamma_file, "gamma.json from train");
  simulate->add_option("-o,--out", o.out, "Per-request selections CSV");

  auto* train = app.add_subcommand("train", "Grid-search weights on all requests");
  with_data(train);
  train->add_option("-o,--out", o.out, "Output file (default gamma.json)");

  auto* cv = app.add_subcommand("cv", "Cross-validate the weight search");
  with_data(cv);
  cv->add_option("--seed", o.seed, "Fold shuffle seed");
  cv->add_option("--folds", o.folds, "Number of folds");
  cv->add_option("-o,--out", o.out, "Output CSV (default fold_report.csv)");
  cv->add_option("--table", o.table, "Also write the text summary here");

  auto* sweep = app.add_subcommand("sweep", "Sweep the revenue bound");
  with_data(sweep);
  sweep->add_option("--seed", o.seed, "Split seed");
  sweep->add_option("-o,--out", o.out, "Output CSV (default sweep.csv)");

  auto* stats = app.add_subcommand("stats", "Scenario counts and metric histograms");
  with_data(stats);
  stats->add_option("--bins", o.bins, "Histogram bins")->capture_default_str();
  stats->add_option("-o,--out", o.out, "Output directory");

  CLI11_PARSE(app, argc, argv);
  if (o.scalar) simd::set_active_isa(simd::Isa::kScalar);

  try {
    const auto* sub = app.get_subcommands().front();
    const std::string& name = sub->get_name();
    if (name == "ingest") return cmd_ingest(o);
    if (name == "synth") return cmd_synth(o);
    if (name == "topics") return cmd_topics(o);
    if (name == "simulate") return cmd_simulate(o);
    if (name == "train") return cmd_train(o);
    if (name == "cv") return cmd_cv(o);
    if (name == "sweep") return cmd_sweep(o);
    return cmd_stats(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_validation_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
