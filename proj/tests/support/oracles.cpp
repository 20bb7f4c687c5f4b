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

#include "support/oracles.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

namespace rtbsel::testing {

Id advertiser_name(int i) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "adv%02d", i);
  return buf;
}

AuctionRequest random_request(Rng& rng, int max_slots, int max_bidders, int pool) {
  std::uniform_int_distribution<int> slots_d(1, max_slots), bidders_d(1, max_bidders),
      bid_d(0, 20);
  AuctionRequest r;
  r.id = "r";
  r.webpage_id = "p";
  const int slots = slots_d(rng);
  std::vector<int> ids(pool);
  std::iota(ids.begin(), ids.end(), 0);
  for (int s = 0; s < slots; ++s) {
    std::shuffle(ids.begin(), ids.end(), rng);
    const int n = std::min(bidders_d(rng), pool);
    std::vector<BidEntry> bids;
    for (int i = 0; i < n; ++i) {
      const double bid = 0.25 * bid_d(rng);
      bids.push_back({"s" + std::to_string(s) + "b" + std::to_string(i), advertiser_name(ids[i]),
                      bid, bid});
    }
    r.per_slot_bids.push_back(std::move(bids));
  }
  return r;
}

RandomAttributes random_attributes(Rng& rng, const AuctionRequest& request) {
  std::uniform_int_distribution<int> q(0, 8);
  RandomAttributes a;
  for (const auto& bids : request.per_slot_bids) {
    auto& row = a.table.emplace_back();
    for (std::size_t i = 0; i < bids.size(); ++i) {
      row.push_back({q(rng) / 8.0, q(rng) / 80.0, q(rng) / 8.0, q(rng) / 8.0});
    }
  }
  return a;
}

AttributeLookup RandomAttributes::lookup() const {
  return [table = table](std::size_t slot, const BidEntry& bid) {
    const std::size_t i = std::stoul(bid.ad_id.substr(bid.ad_id.find('b') + 1));
    return table[slot][i];
  };
}

CompetitorRelation random_relation(Rng& rng, int pool, double density) {
  std::bernoulli_distribution coin(density);
  CompetitorRelation rel;
  for (int a = 0; a < pool; ++a) {
    for (int b = a + 1; b < pool; ++b) {
      if (coin(rng)) rel.add(advertiser_name(a), advertiser_name(b));
    }
  }
  return rel;
}

namespace {

void product_rec(const AuctionRequest& r, std::size_t s, CandidateRow& cur,
                 std::vector<CandidateRow>& out) {
  if (s == r.slot_count()) {
    out.push_back(cur);
    return;
  }
  for (std::size_t i = 0; i < r.per_slot_bids[s].size(); ++i) {
    cur.picks.push_back(i);
    product_rec(r, s + 1, cur, out);
    cur.picks.pop_back();
  }
}

MetricVector add(const MetricVector& a, const MetricVector& b) {
  MetricVector out;
  for (std::size_t k = 0; k < kNumMetrics; ++k) out[k] = a[k] + b[k];
  return out;
}

}  // namespace

std::vector<CandidateRow> cartesian_product(const AuctionRequest& request) {
  std::vector<CandidateRow> out;
  CandidateRow cur;
  product_rec(request, 0, cur, out);
  return out;
}

std::vector<double> oracle_payments(const std::vector<BidEntry>& bids, double reserve) {
  std::vector<std::size_t> order(bids.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (bids[a].bid != bids[b].bid) return bids[a].bid > bids[b].bid;
    return bids[a].advertiser_id < bids[b].advertiser_id;
  });
  std::vector<double> pay(bids.size());
  for (std::size_t p = 0; p < order.size(); ++p) {
    pay[order[p]] = p + 1 < order.size() ? bids[order[p + 1]].bid : reserve;
  }
  return pay;
}

OracleTables oracle_tables(const AuctionRequest& request, const RandomAttributes& attrs,
                           double reserve) {
  OracleTables t;
  for (std::size_t s = 0; s < request.slot_count(); ++s) {
    const auto& bids = request.per_slot_bids[s];
    const auto pay = oracle_payments(bids, reserve);
    auto& row = t.contribution.emplace_back();
    for (std::size_t i = 0; i < bids.size(); ++i) {
      const auto& a = attrs.table[s][i];
      row.push_back(MetricVector{
          {pay[i], bids[i].value - pay[i], a.memorability, a.ctr, a.relevance, a.saliency}});
    }
  }
  return t;
}

OracleTables oracle_tables(const MetricContext& ctx) {
  OracleTables t;
  for (const auto& slot : ctx.slots) {
    auto& row = t.contribution.emplace_back();
    for (const auto& b : slot) {
      row.push_back(MetricVector{{b.payment, b.value - b.payment, b.memorability, b.ctr,
                                  b.relevance, b.saliency}});
    }
  }
  return t;
}

MetricVector oracle_sum(const CandidateRow& row, const OracleTables& t) {
  MetricVector x;
  for (std::size_t s = 0; s < row.picks.size(); ++s) x = add(x, t.contribution[s][row.picks[s]]);
  return x;
}

ColumnExtrema oracle_extrema(const std::vector<CandidateRow>& omega, const OracleTables& t) {
  ColumnExtrema e;
  e.min.fill(std::numeric_limits<double>::infinity());
  e.max.fill(-std::numeric_limits<double>::infinity());
  for (const auto& row : omega) {
    const MetricVector x = oracle_sum(row, t);
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      e.min[k] = std::min(e.min[k], x[k]);
      e.max[k] = std::max(e.max[k], x[k]);
    }
  }
  return e;
}

bool oracle_competitive(const CandidateRow& row, const AuctionRequest& request,
                        const CompetitorRelation& relation) {
  for (std::size_t s = 0; s < row.picks.size(); ++s) {
    for (std::size_t t = 0; t < row.picks.size(); ++t) {
      if (s == t) continue;
      if (relation.contains(request.per_slot_bids[s][row.picks[s]].advertiser_id,
                            request.per_slot_bids[t][row.picks[t]].advertiser_id)) {
        return true;
      }
    }
  }
  return false;
}

CandidateRow oracle_baseline_row(const AuctionRequest& request) {
  CandidateRow row;
  for (const auto& bids : request.per_slot_bids) {
    std::vector<std::size_t> idx(bids.size());
    std::iota(idx.begin(), idx.end(), 0);
    row.picks.push_back(*std::min_element(idx.begin(), idx.end(), [&](auto a, auto b) {
      if (bids[a].bid != bids[b].bid) return bids[a].bid > bids[b].bid;
      return bids[a].advertiser_id < bids[b].advertiser_id;
    }));
  }
  return row;
}

OracleSelection oracle_select(const AuctionRequest& request, const OracleTables& t,
                              const CompetitorRelation& relation,
                              const std::array<double, 6>& gamma) {
  const auto omega = cartesian_product(request);
  const ColumnExtrema e = oracle_extrema(omega, t);
  OracleSelection best;
  bool found = false;
  for (const auto& row : omega) {
    if (oracle_competitive(row, request, relation)) continue;
    const MetricVector raw = oracle_sum(row, t);
    double score = 0.0;
    for (std::size_t k = 0; k < kNumMetrics; ++k) {
      const double range = e.max[k] - e.min[k];
      double x = 0.0;
      if (range > 0.0) x = std::clamp((raw[k] - e.min[k]) / range, 0.0, 1.0);
      score = k == 0 ? gamma[k] * x : score + gamma[k] * x;
    }
    if (!found || score > best.score) {
      best = {row, score, raw, false};
      found = true;
    }
  }
  if (!found) {
    best.row = oracle_baseline_row(request);
    best.raw = oracle_sum(best.row, t);
    best.score = 0.0;
    best.fallback = true;
  }
  return best;
}

std::vector<std::array<double, 6>> oracle_simplex(int m) {
  std::vector<std::array<double, 6>> out;
  std::array<int, 6> c{};
  auto rec = [&](auto&& self, int k, int left) -> void {
    if (k == 5) {
      c[5] = left;
      std::array<double, 6> g;
      for (int i = 0; i < 6; ++i) g[i] = static_cast<double>(c[i]) / m;
      out.push_back(g);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      c[k] = v;
      self(self, k + 1, left - v);
    }
  };
  rec(rec, 0, m);
  return out;
}

std::optional<OracleGridResult> oracle_grid_search(const std::vector<OracleRequest>& data,
                                                   const CompetitorRelation& relation, int m,
                                                   const std::array<double, 6>& theta) {
  std::optional<OracleGridResult> best;
  for (const auto& gamma : oracle_simplex(m)) {
    double objective = 0.0;
    MetricVector sel, base;
    for (const auto& d : data) {
      const auto pick = oracle_select(*d.request, d.tables, relation, gamma);
      if (!pick.fallback) objective = objective + pick.score;
      sel = add(sel, pick.raw);
      base = add(base, oracle_sum(oracle_baseline_row(*d.request), d.tables));
    }
    bool feasible = true;
    for (std::size_t k = 0; k < kNumMetrics && feasible; ++k) {
      const double num = sel[k] - base[k];
      if (base[k] == 0.0) continue;  // zero change, or undefined and skipped
      feasible = num / base[k] >= theta[k];
    }
    if (feasible && (!best || objective > best->objective)) best = OracleGridResult{gamma, objective};
  }
  return best;
}

std::vector<double> exact_mbd(const GrayImage& img) {
  const int w = img.width, h = img.height, n = w * h;
  std::vector<double> levels(img.data);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  const double inf = std::numeric_limits<double>::infinity();
  for (double l : levels) {
    std::vector<double> cost(n, inf);
    std::vector<char> done(n, 0);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const bool border = x == 0 || y == 0 || x == w - 1 || y == h - 1;
        if (border && img.at(x, y) >= l) cost[y * w + x] = img.at(x, y);
      }
    }
    for (;;) {
      int u = -1;
      for (int i = 0; i < n; ++i) {
        if (!done[i] && cost[i] < inf && (u < 0 || cost[i] < cost[u])) u = i;
      }
      if (u < 0) break;
      done[u] = 1;
      const int ux = u % w, uy = u / w;
      const int nb[4][2] = {{ux - 1, uy}, {ux + 1, uy}, {ux, uy - 1}, {ux, uy + 1}};
      for (const auto& p : nb) {
        if (p[0] < 0 || p[1] < 0 || p[0] >= w || p[1] >= h) continue;
        const double v = img.at(p[0], p[1]);
        if (v < l) continue;
        const int q = p[1] * w + p[0];
        cost[q] = std::min(cost[q], std::max(cost[u], v));
      }
    }
    for (int i = 0; i < n; ++i) {
      if (cost[i] < inf) best[i] = std::min(best[i], cost[i] - l);
    }
  }
  return best;
}

GrayImage random_dyadic_image(Rng& rng, int w, int h) {
  std::uniform_int_distribution<int> d(0, 256);
  GrayImage img(w, h);
  for (auto& v : img.data) v = d(rng) / 256.0;
  return img;
}

GrayImage inverted(const GrayImage& img) {
  GrayImage out = img;
  for (auto& v : out.data) v = 1.0 - v;
  return out;
}

namespace {

Ad make_ad(const char* id, const char* adv, const char* domain, const char* title) {
  Ad a;
  a.id = id;
  a.advertiser_id = adv;
  a.company_domain = domain;
  a.landing_title = title;
  a.landing_keywords = title;
  a.landing_description = std::string("Official page for ") + title;
  a.memorability = 0.7;
  a.ctr = 0.02;
  return a;
}

Webpage make_page(const char* id, int slots) {
  Webpage p;
  p.id = id;
  p.url = std::string("https://news.example/") + id;
  p.title = "Daily news";
  for (int s = 0; s < slots; ++s) {
    p.slots.push_back({"s" + std::to_string(s + 1), Rect{0, 10 * s, 20, 8}});
  }
  return p;
}

}  // namespace

ScenarioFixture scenario_fixture() {
  ScenarioFixture f;
  Dataset& d = f.dataset;
  d.ads = {
      make_ad("iphone", "adv_apple", "apple.com", "iPhone"),
      // Same landing page as iphone, booked by a second Apple account.
      make_ad("iphone_b", "adv_apple_store", "apple.com", "iPhone"),
      make_ad("macbook", "adv_apple", "apple.com", "MacBook"),
      make_ad("galaxy", "adv_samsung", "samsung.com", "Galaxy"),
      make_ad("runner", "adv_nike", "nike.com", "Running shoes"),
      make_ad("boost", "adv_adidas", "adidas.com", "Boost shoes"),
      make_ad("loans", "adv_bank", "bank.com", "Home loans"),
  };
  d.webpages = {make_page("p1", 1), make_page("p2", 2), make_page("p3", 3), make_page("p4", 4)};
  d.reindex();
  auto bid = [&](const char* ad, double amount) {
    return BidEntry{ad, d.ad(ad).advertiser_id, amount, amount};
  };
  // Each slot: the winner at 5 and a low filler bidder.
  auto slot = [&](const char* winner) {
    const bool bank = std::string(winner) == "loans";
    return std::vector<BidEntry>{bid(winner, 5.0), bid(bank ? "galaxy" : "loans", 1.0)};
  };
  auto request = [&](const char* id, const char* page, std::vector<std::vector<BidEntry>> slots) {
    d.requests.push_back({id, page, std::move(slots)});
  };
  request("r01", "p2", {slot("iphone"), slot("iphone")});  // same ad: landing + company
  request("r02", "p2", {slot("iphone"), slot("iphone_b")});  // landing + company
  request("r03", "p2", {slot("iphone"), slot("macbook")});   // company
  request("r04", "p2", {slot("iphone"), slot("galaxy")});    // competitive
  request("r05", "p2", {{bid("runner", 3.0), bid("boost", 3.0)}, slot("loans")});  // none
  // Tie at 4 between adidas and apple goes to adv_adidas: competitive with nike.
  request("r06", "p3", {slot("runner"), {bid("iphone", 4.0), bid("boost", 4.0)}, slot("loans")});
  request("r07", "p3", {slot("iphone"), slot("macbook"), slot("galaxy")});  // company + comp
  request("r08", "p3", {slot("iphone_b"), slot("iphone"), slot("runner")});  // landing + company
  request("r09", "p3", {slot("loans"), slot("runner"), slot("galaxy")});     // none
  request("r10", "p4", {slot("iphone"), slot("galaxy"), slot("runner"), slot("boost")});  // comp
  request("r11", "p4", {slot("macbook"), slot("iphone"), slot("iphone_b"), slot("loans")});
  request("r12", "p1", {slot("iphone")});  // single slot, never counted
  d.reindex();

  f.relation.add("adv_apple", "adv_samsung");
  f.relation.add("adv_apple_store", "adv_samsung");
  f.relation.add("adv_nike", "adv_adidas");

  f.expected_by_slots[0] = {5, 2, 3, 1};
  f.expected_by_slots[1] = {4, 1, 2, 2};
  f.expected_by_slots[2] = {2, 1, 1, 1};
  f.expected_total = {11, 4, 6, 4};
  return f;
}

}  // namespace rtbsel::testing
