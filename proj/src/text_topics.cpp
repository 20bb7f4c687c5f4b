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

#include "rtbsel/text_topics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace rtbsel {

namespace {
#include "stopwords.inc"
}  // namespace

const StopwordSet& default_stopwords() {
  static const StopwordSet kSet = [] {
    StopwordSet set;
    std::istringstream in(kBuiltinStopwords);
    for (std::string w; in >> w;) set.insert(w);
    return set;
  }();
  return kSet;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot open stopword file " + path.string());
  StopwordSet set;
  for (std::string line; std::getline(in, line);) {
    std::string word;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) {
        word.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      }
    }
    if (!word.empty()) set.insert(std::move(word));
  }
  return set;
}

std::vector<std::string> tokenize(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> tokens;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2 && !stopwords.contains(current)) tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c < 0x80 && std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::int64_t Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> corpus) {
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "vocabulary needs documents");
  Vocabulary vocab;
  std::vector<std::size_t> df;
  for (const auto& doc : corpus) {
    std::unordered_set<std::size_t> seen;
    for (const auto& token : doc) {
      auto [it, inserted] = vocab.index_.try_emplace(token, vocab.terms_.size());
      if (inserted) {
        vocab.terms_.push_back(token);
        df.push_back(0);
      }
      if (seen.insert(it->second).second) ++df[it->second];
    }
  }
  vocab.document_count_ = corpus.size();
  const double n = static_cast<double>(corpus.size());
  vocab.idf_.resize(df.size());
  for (std::size_t i = 0; i < df.size(); ++i) {
    vocab.idf_[i] = std::log((1.0 + n) / (1.0 + static_cast<double>(df[i]))) + 1.0;
  }
  return vocab;
}

double SparseVector::norm() const {
  double s = 0.0;
  for (const auto& [i, w] : entries) s += w * w;
  return std::sqrt(s);
}

SparseVector tfidf_vector(std::span<const std::string> tokens, const Vocabulary& vocab) {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : tokens) {
    const auto idx = vocab.index_of(t);
    if (idx >= 0) counts[static_cast<std::uint32_t>(idx)] += 1.0;
  }
  SparseVector v;
  v.entries.reserve(counts.size());
  for (const auto& [idx, tf] : counts) {
    const double w = tf * vocab.idf(idx);
    if (w != 0.0) v.entries.emplace_back(idx, w);
  }
  const double n = v.norm();
  if (n > 0.0) {
    for (auto& e : v.entries) e.second /= n;
  }
  return v;
}

double dot(const SparseVector& u, const SparseVector& v) {
  double s = 0.0;
  auto a = u.entries.begin();
  auto b = v.entries.begin();
  while (a != u.entries.end() && b != v.entries.end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      s += a->second * b->second;
      ++a;
      ++b;
    }
  }
  return s;
}

double cosine_similarity(const SparseVector& u, const SparseVector& v) {
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) return 0.0;
  return std::clamp(dot(u, v) / (nu * nv), 0.0, 1.0);
}

namespace {

SparseVector l2_normalized(const SparseVector& v) {
  SparseVector out = v;
  const double n = v.norm();
  if (n > 0.0) {
    for (auto& e : out.entries) e.second /= n;
  }
  return out;
}

double squared_distance(const SparseVector& x, double x_norm2, const std::vector<double>& c,
                        double c_norm2) {
  double cross = 0.0;
  for (const auto& [i, w] : x.entries) cross += w * c[i];
  return std::max(0.0, x_norm2 - 2.0 * cross + c_norm2);
}

double squared_norm(const std::vector<double>& c) {
  double s = 0.0;
  for (double v : c) s += v * v;
  return s;
}

std::vector<double> densify(const SparseVector& v, std::size_t dim) {
  std::vector<double> d(dim, 0.0);
  for (const auto& [i, w] : v.entries) d[i] = w;
  return d;
}

}  // namespace

KMeansResult kmeans_cluster(std::span<const SparseVector> vectors, std::size_t dimension, int k,
                            std::uint64_t seed, int max_iters) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (vectors.empty()) throw Error(ErrorCode::InvalidArgument, "no vectors to cluster");
  if (max_iters < 1) throw Error(ErrorCode::InvalidArgument, "max_iters must be >= 1");

  std::vector<SparseVector> points;
  points.reserve(vectors.size());
  for (const auto& v : vectors) {
    for (const auto& [i, w] : v.entries) {
      if (i >= dimension) throw Error(ErrorCode::InvalidArgument, "vector index exceeds dimension");
    }
    points.push_back(l2_normalized(v));
  }
  {
    std::set<std::vector<std::pair<std::uint32_t, double>>> distinct;
    for (const auto& p : points) distinct.insert(p.entries);
    if (distinct.size() < static_cast<std::size_t>(k)) {
      throw Error(ErrorCode::TooFewDistinctVectors,
                  std::to_string(distinct.size()) + " distinct vectors for k = " +
                      std::to_string(k));
    }
  }
  const std::size_t n = points.size();
  std::vector<double> point_norm2(n);
  for (std::size_t i = 0; i < n; ++i) point_norm2[i] = points[i].norm() * points[i].norm();

  // k-means++ seeding.
  std::mt19937_64 rng(seed);
  KMeansResult result;
  std::vector<double> min_d2(n, std::numeric_limits<double>::infinity());
  std::size_t first = std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  result.centroids.push_back(densify(points[first], dimension));
  while (result.centroids.size() < static_cast<std::size_t>(k)) {
    const auto& c = result.centroids.back();
    const double cn = squared_norm(c);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      min_d2[i] = std::min(min_d2[i], squared_distance(points[i], point_norm2[i], c, cn));
      total += min_d2[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = std::uniform_real_distribution<double>(0.0, total)(rng);
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (min_d2[i] <= 0.0) continue;
        acc += min_d2[i];
        pick = i;
        if (acc > target) break;
      }
    }
    if (pick == n) {
      // Only reachable through rounding; take the farthest point.
      pick = static_cast<std::size_t>(
          std::max_element(min_d2.begin(), min_d2.end()) - min_d2.begin());
    }
    result.centroids.push_back(densify(points[pick], dimension));
  }

  result.labels.assign(n, -1);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::vector<double> cnorm(result.centroids.size());
    for (std::size_t c = 0; c < cnorm.size(); ++c) cnorm[c] = squared_norm(result.centroids[c]);

    bool changed = false;
    double objective = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (int c = 0; c < k; ++c) {
        const double d = squared_distance(points[i], point_norm2[i], result.centroids[c], cnorm[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (result.labels[i] != best) changed = true;
      result.labels[i] = best;
      objective += best_d;
    }
    result.objective_trace.push_back(objective);
    result.iterations = iter + 1;
    if (!changed && iter > 0) break;

    // Update step; an empty cluster keeps its previous centroid.
    std::vector<std::vector<double>> sums(k, std::vector<double>(dimension, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      const int c = result.labels[i];
      ++counts[c];
      for (const auto& [d, w] : points[i].entries) sums[c][d] += w;
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] == 0) continue;
      for (auto& v : sums[c]) v /= static_cast<double>(counts[c]);
      result.centroids[c] = std::move(sums[c]);
    }
  }
  return result;
}

TopicAssignment cluster_ads(std::span<const Ad> ads, const Vocabulary& vocab, int k,
                            std::uint64_t seed, int max_iters) {
  TopicAssignment out;
  std::vector<SparseVector> vectors;
  std::vector<std::size_t> owners;
  for (std::size_t i = 0; i < ads.size(); ++i) {
    const auto tokens = tokenize(ads[i].landing_text());
    SparseVector v = tfidf_vector(tokens, vocab);
    if (v.empty()) {
      out.by_ad[ads[i].id] = kNoTopic;
    } else {
      vectors.push_back(std::move(v));
      owners.push_back(i);
    }
  }
  if (vectors.empty()) return out;
  std::set<std::vector<std::pair<std::uint32_t, double>>> distinct;
  for (const auto& v : vectors) distinct.insert(v.entries);
  const int effective_k = std::min<int>(k, static_cast<int>(distinct.size()));
  KMeansResult km = kmeans_cluster(vectors, vocab.size(), effective_k, seed, max_iters);
  for (std::size_t j = 0; j < owners.size(); ++j) out.by_ad[ads[owners[j]].id] = km.labels[j];
  out.centroids = std::move(km.centroids);
  return out;
}

std::string CompetitorRelation::key(const Id& p, const Id& q) {
  const Id& a = p < q ? p : q;
  const Id& b = p < q ? q : p;
  std::string k;
  k.reserve(a.size() + b.size() + 1);
  k.append(a).push_back('\x1f');
  k.append(b);
  return k;
}

void CompetitorRelation::add(const Id& p, const Id& q) {
  if (p == q) return;
  pairs_.insert(key(p, q));
}

bool CompetitorRelation::contains(const Id& p, const Id& q) const {
  if (p == q) return false;
  return pairs_.contains(key(p, q));
}

std::vector<std::pair<Id, Id>> CompetitorRelation::pairs() const {
  std::vector<std::pair<Id, Id>> out;
  out.reserve(pairs_.size());
  for (const auto& k : pairs_) {
    const auto sep = k.find('\x1f');
    out.emplace_back(k.substr(0, sep), k.substr(sep + 1));
  }
  std::sort(out.begin(), out.end());
  return out;
}

CompetitorRelation build_competitor_relation(std::span<const Ad> ads,
                                             const TopicAssignment& topics) {
  std::map<int, std::vector<const Ad*>> by_topic;
  for (const auto& ad : ads) {
    auto it = topics.by_ad.find(ad.id);
    if (it == topics.by_ad.end()) {
      throw Error(ErrorCode::UnclusteredAd, "ad " + ad.id + " has no topic");
    }
    if (it->second != kNoTopic) by_topic[it->second].push_back(&ad);
  }
  CompetitorRelation rel;
  for (const auto& [topic, members] : by_topic) {
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const Ad& a = *members[i];
        const Ad& b = *members[j];
        if (a.advertiser_id != b.advertiser_id && a.company_domain != b.company_domain) {
          rel.add(a.advertiser_id, b.advertiser_id);
        }
      }
    }
  }
  return rel;
}

}  // namespace rtbsel
