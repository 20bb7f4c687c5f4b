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

// Bag-of-words text handling: tokenization, TF-IDF vectors, cosine
// similarity, k-means topic clustering, and the competitor relation between
// advertisers derived from shared topics.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rtbsel/core_model.hpp"

namespace rtbsel {

using StopwordSet = std::unordered_set<std::string>;

// The 50-word list shipped in resources/stopwords.txt, compiled in.
const StopwordSet& default_stopwords();
// One token per line; blank lines ignored.
StopwordSet load_stopwords(const std::filesystem::path& path);

// Lowercases ASCII, splits on every non-alphanumeric byte, drops tokens
// shorter than two characters and stopwords.
std::vector<std::string> tokenize(std::string_view text,
                                  const StopwordSet& stopwords = default_stopwords());

class Vocabulary {
 public:
  std::size_t size() const { return terms_.size(); }
  std::size_t document_count() const { return document_count_; }

  // Dense index of term, or -1 when out of vocabulary.
  std::int64_t index_of(std::string_view term) const;
  const std::string& term(std::size_t index) const { return terms_[index]; }
  double idf(std::size_t index) const { return idf_[index]; }

 private:
  friend Vocabulary build_vocabulary(std::span<const std::vector<std::string>> corpus);

  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  std::size_t document_count_ = 0;
};

// idf(t) = ln((1 + N) / (1 + df(t))) + 1; terms indexed by first appearance.
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> corpus);

struct SparseVector {
  // Strictly increasing indices, no explicit zeros.
  std::vector<std::pair<std::uint32_t, double>> entries;

  bool empty() const { return entries.empty(); }
  double norm() const;
  bool operator==(const SparseVector&) const = default;
};

// Raw-count tf times idf, L2-normalized. All-OOV input gives the zero vector.
SparseVector tfidf_vector(std::span<const std::string> tokens, const Vocabulary& vocab);

double dot(const SparseVector& u, const SparseVector& v);

// Clamped to [0, 1]; zero when either side is the zero vector.
double cosine_similarity(const SparseVector& u, const SparseVector& v);

struct KMeansResult {
  std::vector<int> labels;  // one per input vector
  std::vector<std::vector<double>> centroids;
  // Within-cluster sum of squared distances after each assignment step.
  std::vector<double> objective_trace;
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding on L2-normalized vectors.
// Squared Euclidean distance, nearest-centroid ties go to the lowest index.
KMeansResult kmeans_cluster(std::span<const SparseVector> vectors, std::size_t dimension,
                            int k, std::uint64_t seed, int max_iters = 100);

inline constexpr int kDefaultTopicCount = 24;
inline constexpr int kNoTopic = -1;

struct TopicAssignment {
  // Ads with empty landing text carry kNoTopic.
  std::unordered_map<Id, int> by_ad;
  std::vector<std::vector<double>> centroids;
};

// Vectorizes landing texts against vocab and clusters the non-empty ones.
// When fewer distinct non-empty vectors than k exist, k shrinks to that count.
TopicAssignment cluster_ads(std::span<const Ad> ads, const Vocabulary& vocab, int k,
                            std::uint64_t seed, int max_iters = 100);

class CompetitorRelation {
 public:
  void add(const Id& p, const Id& q);
  bool contains(const Id& p, const Id& q) const;
  std::size_t size() const { return pairs_.size(); }

  // Canonical (smaller, larger) pairs in sorted order.
  std::vector<std::pair<Id, Id>> pairs() const;

 private:
  static std::string key(const Id& p, const Id& q);
  std::unordered_set<std::string> pairs_;
};

// (p, q) present iff p != q and some ad of p shares a topic with some ad of q
// belonging to a different company domain. kNoTopic never matches.
CompetitorRelation build_competitor_relation(std::span<const Ad> ads,
                                             const TopicAssignment& topics);

}  // namespace rtbsel
