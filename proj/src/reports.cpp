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

#include "rtbsel/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

namespace rtbsel {

bool same_landing_page(const Ad& a, const Ad& b) {
  if (a.id == b.id) return true;
  return a.company_domain == b.company_domain && a.landing_title == b.landing_title &&
         a.landing_keywords == b.landing_keywords &&
         a.landing_description == b.landing_description;
}

ScenarioStats scenario_stats(const Dataset& d, const CompetitorRelation& relation) {
  ScenarioStats stats;
  for (const auto& req : d.requests) {
    const std::size_t n = req.slot_count();
    if (n < 2) continue;
    std::vector<const Ad*> shown;
    for (const auto& bids : req.per_slot_bids) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < bids.size(); ++i) {
        if (bids[i].bid > bids[best].bid ||
            (bids[i].bid == bids[best].bid && bids[i].advertiser_id < bids[best].advertiser_id)) {
          best = i;
        }
      }
      shown.push_back(&d.ad(bids[best].ad_id));
    }
    bool landing = false;
    bool company = false;
    bool competitive = false;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = s + 1; t < n; ++t) {
        landing = landing || same_landing_page(*shown[s], *shown[t]);
        company = company || shown[s]->company_domain == shown[t]->company_domain;
        competitive =
            competitive || relation.contains(shown[s]->advertiser_id, shown[t]->advertiser_id);
      }
    }
    for (ScenarioCounts* c : {&stats.total, &stats.by_slots[std::min<std::size_t>(n, 4) - 2]}) {
      ++c->requests;
      c->same_landing_page += landing;
      c->same_company += company;
      c->competitive += competitive;
    }
  }
  return stats;
}

std::vector<std::size_t> histogram(std::span<const double> values, int bins, double lo, double hi) {
  if (bins < 2) throw Error(ErrorCode::InvalidArgument, "histograms need at least two bins");
  if (!(hi > lo)) throw Error(ErrorCode::InvalidArgument, "histogram range is empty");
  std::vector<std::size_t> counts(bins, 0);
  for (double v : values) {
    const double pos = (v - lo) / (hi - lo) * bins;
    const int b = std::clamp(static_cast<int>(std::floor(pos)), 0, bins - 1);
    ++counts[b];
  }
  return counts;
}

MetricHistograms metric_histograms(const Experiment& exp, int bins) {
  std::set<std::tuple<Id, std::size_t, Id>> seen;
  std::vector<double> mem, rel, sal;
  for (std::size_t j = 0; j < exp.request_count(); ++j) {
    const auto& req = exp.request(j);
    const auto& ctx = exp.context(j);
    for (std::size_t s = 0; s < req.slot_count(); ++s) {
      for (std::size_t i = 0; i < req.per_slot_bids[s].size(); ++i) {
        if (!seen.emplace(req.webpage_id, s, req.per_slot_bids[s][i].ad_id).second) continue;
        const auto& m = ctx.slots[s][i];
        mem.push_back(m.memorability);
        rel.push_back(m.relevance);
        sal.push_back(m.saliency);
      }
    }
  }
  MetricHistograms h;
  h.bins = bins;
  h.pairs = mem.size();
  h.memorability = histogram(mem, bins);
  h.relevance = histogram(rel, bins);
  h.saliency = histogram(sal, bins);
  return h;
}

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v == 0.0 ? 0.0 : v);
  return buf;
}

std::string percent(double v) {
  char buf[32];
  const double p = std::round(v * 1000.0) / 10.0;
  std::snprintf(buf, sizeof buf, "%.1f%%", p == 0.0 ? 0.0 : p);
  return buf;
}

void write_xi(std::ostream& out, const ChangeReport& r) {
  for (std::size_t k = 0; k < kNumMetrics; ++k) out << ',' << (r.defined[k] ? fixed(r.xi[k]) : "nan");
}

}  // namespace

void write_fold_report_csv(std::ostream& out, const CrossValidation& cv) {
  out << "fold";
  for (int k = 1; k <= 6; ++k) out << ",gamma" << k;
  for (int k = 1; k <= 6; ++k) out << ",train_xi" << k;
  for (int k = 1; k <= 6; ++k) out << ",test_xi" << k;
  out << ",train_objective,test_objective,train_fallbacks,test_fallbacks\n";
  for (const auto& f : cv.folds) {
    out << f.fold;
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      out << ',' << (f.gamma ? fixed((*f.gamma)[k], 2) : "-");
    }
    write_xi(out, f.train_xi);
    write_xi(out, f.test_xi);
    out << ',' << fixed(f.train_objective) << ',' << fixed(f.test_objective) << ','
        << f.train_fallbacks << ',' << f.test_fallbacks << '\n';
  }
  auto summary_row = [&](const char* label, const std::array<double, kNumMetrics>& train,
                         const std::array<double, kNumMetrics>& test) {
    out << label;
    for (std::size_t k = 0; k < kNumMetrics; ++k) out << ",-";
    for (double v : train) out << ',' << fixed(v);
    for (double v : test) out << ',' << fixed(v);
    out << ",-,-,-,-\n";
  };
  summary_row("Mean", cv.train.mean, cv.test.mean);
  summary_row("Std", cv.train.stddev, cv.test.stddev);
}

void write_fold_table(std::ostream& out, const CrossValidation& cv) {
  char buf[64];
  out << "Fold |" << std::string(6 * 6 - 5, ' ') << "Optimal weight |" << std::string(41, ' ')
      << "Training set |" << std::string(45, ' ') << "Test set\n";
  out << "     ";
  for (int k = 1; k <= 6; ++k) {
    std::snprintf(buf, sizeof buf, " %5s", ("g" + std::to_string(k)).c_str());
    out << buf;
  }
  for (int rep = 0; rep < 2; ++rep) {
    out << " |";
    for (int k = 1; k <= 6; ++k) {
      std::snprintf(buf, sizeof buf, " %7s", ("xi" + std::to_string(k)).c_str());
      out << buf;
    }
  }
  out << '\n';
  for (const auto& f : cv.folds) {
    std::snprintf(buf, sizeof buf, "%4d ", f.fold);
    out << buf;
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      std::snprintf(buf, sizeof buf, " %5s", f.gamma ? fixed((*f.gamma)[k], 2).c_str() : "-");
      out << buf;
    }
    for (const ChangeReport* r : {&f.train_xi, &f.test_xi}) {
      out << " |";
      for (std::size_t k = 0; k < kNumMetrics; ++k) {
        std::snprintf(buf, sizeof buf, " %7s", percent(r->xi[k]).c_str());
        out << buf;
      }
    }
    out << '\n';
  }
  auto summary = [&](const char* label, const ColumnSummary& a, const ColumnSummary& b, bool mean) {
    std::snprintf(buf, sizeof buf, "%-5s", label);
    out << buf;
    for (int k = 0; k < 6; ++k) out << "     -";
    for (const ColumnSummary* s : {&a, &b}) {
      out << " |";
      for (std::size_t k = 0; k < kNumMetrics; ++k) {
        const std::string cell = mean ? percent(s->mean[k]) : fixed(s->stddev[k], 3);
        std::snprintf(buf, sizeof buf, " %7s", cell.c_str());
        out << buf;
      }
    }
    out << '\n';
  };
  summary("Mean", cv.train, cv.test, true);
  summary("Std.", cv.train, cv.test, false);
}

void write_sweep_csv(std::ostream& out, std::span<const SweepPoint> points) {
  out << "theta1,feasible";
  for (int k = 1; k <= 6; ++k) out << ",gamma" << k;
  out << ",train_objective,test_objective";
  for (int k = 1; k <= 6; ++k) out << ",train_xi" << k;
  for (int k = 1; k <= 6; ++k) out << ",test_xi" << k;
  out << '\n';
  for (const auto& p : points) {
    out << fixed(p.theta1, 4) << ',' << (p.feasible ? 1 : 0);
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      out << ',' << (p.gamma ? fixed((*p.gamma)[k], 2) : "-");
    }
    out << ',' << fixed(p.train_objective) << ',' << fixed(p.test_objective);
    write_xi(out, p.train_xi);
    write_xi(out, p.test_xi);
    out << '\n';
  }
}

void write_scenario_stats(std::ostream& out, const ScenarioStats& stats) {
  out << "slots,requests,same_landing_page,same_company,competitive\n";
  const char* labels[] = {"2", "3", ">=4"};
  for (std::size_t i = 0; i < stats.by_slots.size(); ++i) {
    const auto& c = stats.by_slots[i];
    out << labels[i] << ',' << c.requests << ',' << c.same_landing_page << ',' << c.same_company
        << ',' << c.competitive << '\n';
  }
  const auto& t = stats.total;
  out << "all," << t.requests << ',' << t.same_landing_page << ',' << t.same_company << ','
      << t.competitive << '\n';
}

void write_histograms_csv(std::ostream& out, const MetricHistograms& h) {
  out << "bin_lo,bin_hi,memorability,relevance,saliency\n";
  for (int b = 0; b < h.bins; ++b) {
    out << fixed(static_cast<double>(b) / h.bins, 4) << ','
        << fixed(static_cast<double>(b + 1) / h.bins, 4) << ',' << h.memorability[b] << ','
        << h.relevance[b] << ',' << h.saliency[b] << '\n';
  }
}

}  // namespace rtbsel
