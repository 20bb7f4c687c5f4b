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

#include "rtbsel/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_set>

#include <boost/math/distributions/beta.hpp>

namespace rtbsel {

void validate(const SyntheticSpec& s) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidSpec, what);
  };
  require(s.webpages >= 1, "webpages must be >= 1");
  require(s.min_slots >= 1 && s.max_slots >= s.min_slots && s.max_slots <= 4,
          "slots per page must satisfy 1 <= min <= max <= 4");
  require(s.ads >= 1 && s.companies >= 1 && s.advertisers_per_company >= 1,
          "ads, companies and advertisers per company must be >= 1");
  require(s.bidders_per_slot >= 1, "bidders per slot must be >= 1");
  require(s.requests >= 1, "requests must be >= 1");
  require(s.topics >= 1, "topics must be >= 1");
  require(s.bid_log_sigma >= 0.0, "bid log sigma must be >= 0");
  require(s.bid_strength_share >= 0.0 && s.bid_strength_share <= 1.0,
          "bid strength share must lie in [0, 1]");
  require(s.ctr_alpha > 0 && s.ctr_beta > 0, "ctr Beta parameters must be positive");
  require(s.memorability_alpha > 0 && s.memorability_beta > 0,
          "memorability Beta parameters must be positive");
  require(std::abs(s.bid_ctr_correlation) <= 1.0 && std::abs(s.bid_contrast_correlation) <= 1.0,
          "correlations must lie in [-1, 1]");
  require(s.topic_affinity >= 0.0 && s.topic_affinity <= 1.0, "topic affinity must lie in [0, 1]");
  require(s.page_width >= 64 && s.page_height >= 48, "page must be at least 64x48");
}

namespace {

struct Shape {
  int width;
  int height;
};

// Medium rectangle, skyscraper and banner creatives, scaled to the page.
constexpr std::array<Shape, 3> kShapes = {{{24, 18}, {12, 36}, {48, 9}}};

constexpr double kBackground = 235.0 / 255.0;

double quantize(double v) { return std::round(std::clamp(v, 0.0, 1.0) * 255.0) / 255.0; }

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool bernoulli(double p) { return uniform() < p; }
  double beta(double a, double b) {
    const double x = std::gamma_distribution<double>(a, 1.0)(rng_);
    const double y = std::gamma_distribution<double>(b, 1.0)(rng_);
    return x / (x + y);
  }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(uniform_int(0, static_cast<int>(v.size()) - 1))];
  }

 private:
  std::mt19937_64 rng_;
};

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Quantile of u in (0,1) after correlating a standard normal latent with z.
double copula_uniform(Sampler& rng, double z, double rho) {
  const double latent = rho * z + std::sqrt(std::max(0.0, 1.0 - rho * rho)) * rng.normal();
  return std::clamp(normal_cdf(latent), 1e-12, 1.0 - 1e-12);
}

std::string make_id(const char* prefix, int i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%0*d", prefix, width, i);
  return buf;
}

std::vector<std::string> make_words(Sampler& rng, std::size_t count) {
  static const std::vector<std::string> kSyllables = {
      "ba", "ke", "lo", "mi", "nu", "ra", "si", "to", "ve", "zu", "da", "fe", "gi", "ho",
      "ju", "pa", "qui", "re", "so", "ti", "wa", "xe", "yo", "lan", "mor", "tes", "vin"};
  std::set<std::string> seen;
  std::vector<std::string> words;
  while (words.size() < count) {
    std::string w;
    const int n = rng.uniform_int(2, 3);
    for (int i = 0; i < n; ++i) w += rng.pick(kSyllables);
    if (default_stopwords().contains(w) || !seen.insert(w).second) continue;
    words.push_back(w);
  }
  return words;
}

std::string sentence(Sampler& rng, const std::vector<std::string>& pool, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += rng.pick(pool);
  }
  return out;
}

bool overlaps(const Rect& a, const Rect& b, int gap) {
  return a.x < b.x + b.width + gap && b.x < a.x + a.width + gap && a.y < b.y + b.height + gap &&
         b.y < a.y + a.height + gap;
}

GrayImage render_page(Sampler& rng, int w, int h, const std::vector<AdSlot>& slots) {
  GrayImage img(w, h, kBackground);
  // Text lines two pixels high, broken around the slots.
  for (int y = 4; y + 2 < h - 3; y += 5) {
    int x = 3;
    while (x < w - 4) {
      const int len = rng.uniform_int(6, 22);
      const double ink = quantize(rng.uniform_int(60, 140) / 255.0);
      for (int dx = 0; dx < len && x + dx < w - 3; ++dx) {
        for (int dy = 0; dy < 2; ++dy) {
          const Rect px{x + dx, y + dy, 1, 1};
          bool inside_slot = false;
          for (const auto& s : slots) inside_slot = inside_slot || overlaps(px, s.rect, 1);
          if (!inside_slot) img.at(x + dx, y + dy) = ink;
        }
      }
      x += len + rng.uniform_int(2, 5);
    }
  }
  return img;
}

GrayImage render_ad(Sampler& rng, const Shape& shape, double contrast) {
  const double fill = quantize(kBackground - 0.85 * contrast);
  const double accent = quantize(std::min(1.0, fill + 0.25 + 0.1 * rng.uniform()));
  GrayImage img(shape.width, shape.height, fill);
  const int band_y = shape.height / 3;
  const int band_h = std::max(1, shape.height / 4);
  for (int y = band_y; y < band_y + band_h && y < shape.height; ++y) {
    for (int x = shape.width / 6; x < shape.width - shape.width / 6; ++x) img.at(x, y) = accent;
  }
  return img;
}

}  // namespace

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  validate(spec);
  Sampler rng(seed);
  Dataset d;
  d.provenance = "synthetic(" + std::to_string(seed) + ")";

  const auto general_words = make_words(rng, 80);
  std::vector<std::vector<std::string>> topic_words;
  {
    const auto all = make_words(rng, static_cast<std::size_t>(spec.topics) * 10 + spec.companies);
    for (int t = 0; t < spec.topics; ++t) {
      topic_words.emplace_back(all.begin() + t * 10, all.begin() + (t + 1) * 10);
    }
    // Company names follow the topic words and never collide with them.
    for (int c = 0; c < spec.companies; ++c) {
      topic_words.push_back({all[static_cast<std::size_t>(spec.topics) * 10 + c]});
    }
  }
  auto company_name = [&](int c) -> const std::string& { return topic_words[spec.topics + c][0]; };

  std::vector<int> company_topic(spec.companies);
  for (auto& t : company_topic) t = rng.uniform_int(0, spec.topics - 1);
  const int advertisers = spec.companies * spec.advertisers_per_company;

  // Ads.
  std::vector<int> ad_shape(spec.ads);
  std::vector<int> ad_topic(spec.ads);
  std::vector<double> ad_strength(spec.ads);
  for (int i = 0; i < spec.ads; ++i) {
    const int adv = rng.uniform_int(0, advertisers - 1);
    const int company = adv / spec.advertisers_per_company;
    const int topic = company_topic[company];
    const int shape = rng.uniform_int(0, static_cast<int>(kShapes.size()) - 1);
    const double z = rng.normal();
    ad_shape[i] = shape;
    ad_topic[i] = topic;
    ad_strength[i] = z;

    Ad ad;
    ad.id = make_id("ad", i + 1, 4);
    ad.advertiser_id = make_id("adv", adv + 1, 3);
    ad.company_domain = company_name(company) + ".com";
    const auto& words = topic_words[topic];
    ad.landing_title = company_name(company) + " " + sentence(rng, words, 2);
    ad.landing_keywords = sentence(rng, words, 4);
    ad.landing_description = sentence(rng, words, 5) + " " + sentence(rng, general_words, 5);
    ad.memorability = rng.beta(spec.memorability_alpha, spec.memorability_beta);
    const boost::math::beta_distribution<double> ctr_dist(spec.ctr_alpha, spec.ctr_beta);
    ad.ctr = boost::math::quantile(ctr_dist, copula_uniform(rng, z, spec.bid_ctr_correlation));
    const double contrast = 0.05 + 0.9 * copula_uniform(rng, z, spec.bid_contrast_correlation);
    if (spec.images) ad.image = std::make_shared<const GrayImage>(render_ad(rng, kShapes[shape], contrast));
    d.ads.push_back(std::move(ad));
  }

  // Candidate pools by shape and by (shape, topic).
  std::vector<std::vector<int>> by_shape(kShapes.size());
  std::vector<std::vector<std::vector<int>>> by_shape_topic(
      kShapes.size(), std::vector<std::vector<int>>(spec.topics));
  for (int i = 0; i < spec.ads; ++i) {
    by_shape[ad_shape[i]].push_back(i);
    by_shape_topic[ad_shape[i]][ad_topic[i]].push_back(i);
  }
  for (std::size_t s = 0; s < kShapes.size(); ++s) {
    std::unordered_set<std::string> advs;
    for (int i : by_shape[s]) advs.insert(d.ads[i].advertiser_id);
    if (advs.size() < static_cast<std::size_t>(spec.bidders_per_slot)) {
      throw Error(ErrorCode::InvalidSpec, "too few advertisers per creative shape for " +
                                              std::to_string(spec.bidders_per_slot) + " bidders");
    }
  }

  // Webpages.
  std::vector<int> page_topic(spec.webpages);
  std::vector<std::vector<int>> page_slot_shapes(spec.webpages);
  for (int p = 0; p < spec.webpages; ++p) {
    const int topic = rng.uniform_int(0, spec.topics - 1);
    page_topic[p] = topic;
    Webpage page;
    page.id = make_id("p", p + 1, 4);
    page.url = "https://news.example/" + page.id;
    const auto& words = topic_words[topic];
    page.title = sentence(rng, words, 3);
    page.keywords = sentence(rng, words, 4);
    page.description = sentence(rng, words, 4) + " " + sentence(rng, general_words, 4);
    page.content = sentence(rng, words, 20) + " " + sentence(rng, general_words, 30);

    const int n_slots = rng.uniform_int(spec.min_slots, spec.max_slots);
    for (int attempt = 0; page.slots.size() < static_cast<std::size_t>(n_slots); ++attempt) {
      if (attempt > 500) {
        page.slots.clear();
        page_slot_shapes[p].clear();
        attempt = 0;
      }
      const int shape = rng.uniform_int(0, static_cast<int>(kShapes.size()) - 1);
      const Shape& sh = kShapes[shape];
      Rect r{rng.uniform_int(2, spec.page_width - sh.width - 2),
             rng.uniform_int(2, spec.page_height - sh.height - 2), sh.width, sh.height};
      bool clash = false;
      for (const auto& s : page.slots) clash = clash || overlaps(r, s.rect, 3);
      if (clash) continue;
      page.slots.push_back({"s" + std::to_string(page.slots.size() + 1), r});
      page_slot_shapes[p].push_back(shape);
    }
    if (spec.images) {
      page.snapshot = std::make_shared<const GrayImage>(
          render_page(rng, spec.page_width, spec.page_height, page.slots));
    }
    d.webpages.push_back(std::move(page));
  }

  // Auction requests.
  const double share = spec.bid_strength_share;
  for (int r = 0; r < spec.requests; ++r) {
    const int p = rng.uniform_int(0, spec.webpages - 1);
    AuctionRequest req;
    req.id = make_id("r", r + 1, 5);
    req.webpage_id = d.webpages[p].id;
    for (int shape : page_slot_shapes[p]) {
      const auto& topical = by_shape_topic[shape][page_topic[p]];
      std::vector<int> picked;
      std::unordered_set<std::string> advs;
      while (picked.size() < static_cast<std::size_t>(spec.bidders_per_slot)) {
        const bool from_topic = !topical.empty() && rng.bernoulli(spec.topic_affinity);
        const int ad = from_topic ? rng.pick(topical) : rng.pick(by_shape[shape]);
        if (advs.insert(d.ads[ad].advertiser_id).second) picked.push_back(ad);
      }
      std::vector<BidEntry> bids;
      for (;;) {
        bids.clear();
        for (int ad : picked) {
          const double log_bid =
              spec.bid_log_mu + spec.bid_log_sigma * (std::sqrt(share) * ad_strength[ad] +
                                                      std::sqrt(1.0 - share) * rng.normal());
          const double bid = std::exp(log_bid);
          bids.push_back({d.ads[ad].id, d.ads[ad].advertiser_id, bid, bid});
        }
        // The ground truth must hold a strictly highest bid.
        std::vector<double> sorted;
        for (const auto& b : bids) sorted.push_back(b.bid);
        std::sort(sorted.rbegin(), sorted.rend());
        if (sorted.size() < 2 || sorted[0] > sorted[1]) break;
      }
      req.per_slot_bids.push_back(std::move(bids));
    }
    d.requests.push_back(std::move(req));
  }
  d.reindex();
  validate(d);
  return d;
}

}  // namespace rtbsel
