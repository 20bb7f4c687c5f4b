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

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>

#include "rtbsel/simd/kernels.hpp"

namespace rtbsel::simd {
namespace {

struct Columns {
  std::array<std::vector<double>, kColumns> data;
  MetricColumns view() const {
    MetricColumns v;
    for (std::size_t k = 0; k < kColumns; ++k) v.column[k] = data[k].data();
    v.rows = data[0].size();
    return v;
  }
};

// Coarse values so that many rows tie on the rank score.
Columns random_columns(std::mt19937_64& rng, std::size_t rows, int levels) {
  std::uniform_int_distribution<int> q(0, levels);
  Columns c;
  for (auto& col : c.data) {
    col.resize(rows);
    for (auto& v : col) v = static_cast<double>(q(rng)) / levels;
  }
  return c;
}

std::array<double, kColumns> random_gamma(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> q(0, 20);
  std::array<int, kColumns> c{};
  int left = 20;
  for (std::size_t k = 0; k + 1 < kColumns; ++k) {
    c[k] = std::min(left, q(rng) / 3);
    left -= c[k];
  }
  c[kColumns - 1] = left;
  std::array<double, kColumns> g;
  for (std::size_t k = 0; k < kColumns; ++k) g[k] = c[k] / 20.0;
  return g;
}

class SimdEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!cpu_supports(Isa::kAvx2)) GTEST_SKIP() << "AVX2 not available";
  }
};

#if RTBSEL_HAVE_AVX2

TEST_F(SimdEquivalence, ArgmaxBitwiseEqualAcrossSizesAndTies) {
  std::mt19937_64 rng(30);
  for (std::size_t rows = 0; rows <= 70; ++rows) {
    for (int levels : {1, 2, 4, 255}) {
      const Columns c = random_columns(rng, rows, levels);
      const auto gamma = random_gamma(rng);
      const auto a = scalar::argmax_rank_score(c.view(), gamma);
      const auto b = avx2::argmax_rank_score(c.view(), gamma);
      EXPECT_EQ(a.index, b.index) << rows << " rows, " << levels << " levels";
      EXPECT_EQ(std::bit_cast<std::uint64_t>(a.score), std::bit_cast<std::uint64_t>(b.score));
    }
  }
}

TEST_F(SimdEquivalence, ArgmaxOnLargeRandomInputs) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 50; ++t) {
    const Columns c = random_columns(rng, 4099, 1 << 20);
    const auto gamma = random_gamma(rng);
    const auto a = scalar::argmax_rank_score(c.view(), gamma);
    const auto b = avx2::argmax_rank_score(c.view(), gamma);
    EXPECT_EQ(a.index, b.index);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(a.score), std::bit_cast<std::uint64_t>(b.score));
  }
}

TEST_F(SimdEquivalence, MinMaxAndRescale) {
  std::mt19937_64 rng(32);
  std::normal_distribution<double> n(0.0, 3.0);
  for (std::size_t size = 1; size <= 100; ++size) {
    std::vector<double> v(size);
    for (auto& x : v) x = n(rng);
    const auto a = scalar::minmax(v);
    const auto b = avx2::minmax(v);
    EXPECT_EQ(a.min, b.min);
    EXPECT_EQ(a.max, b.max);
    std::vector<double> ra(size), rb(size);
    scalar::rescale(v, ra, a.min, a.max);
    avx2::rescale(v, rb, a.min, a.max);
    EXPECT_EQ(ra, rb);
  }
}

#endif

TEST(ScalarKernels, ArgmaxFirstIndexOnTies) {
  Columns c;
  for (auto& col : c.data) col = {0.5, 1.0, 1.0, 0.2, 1.0};
  const auto r = scalar::argmax_rank_score(c.view(), {1, 0, 0, 0, 0, 0});
  EXPECT_EQ(r.index, 1u);
  EXPECT_EQ(r.score, 1.0);
}

TEST(ScalarKernels, EmptyColumns) {
  Columns c;
  const auto r = scalar::argmax_rank_score(c.view(), {1, 0, 0, 0, 0, 0});
  EXPECT_EQ(r.index, kNoIndex);
}

TEST(Dispatch, ForcingScalarIsHonoured) {
  const Isa before = active_isa();
  set_active_isa(Isa::kScalar);
  EXPECT_EQ(active_isa(), Isa::kScalar);
  set_active_isa(before);
  EXPECT_EQ(isa_name(Isa::kScalar), "scalar");
}

}  // namespace
}  // namespace rtbsel::simd
