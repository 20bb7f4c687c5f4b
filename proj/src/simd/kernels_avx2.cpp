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

#include <immintrin.h>

#include "rtbsel/simd/kernels.hpp"

namespace rtbsel::simd::avx2 {

ArgmaxResult argmax_rank_score(const MetricColumns& cols,
                               const std::array<double, kColumns>& gamma) {
  const auto& c = cols.column;
  const std::size_t n = cols.rows;
  const std::size_t blocks = n / 4 * 4;

  ArgmaxResult best;
  if (blocks > 0) {
    const __m256d g0 = _mm256_set1_pd(gamma[0]);
    const __m256d g1 = _mm256_set1_pd(gamma[1]);
    const __m256d g2 = _mm256_set1_pd(gamma[2]);
    const __m256d g3 = _mm256_set1_pd(gamma[3]);
    const __m256d g4 = _mm256_set1_pd(gamma[4]);
    const __m256d g5 = _mm256_set1_pd(gamma[5]);
    // Lane j tracks rows i with i % 4 == j; strict > keeps the earliest.
    __m256d best_score = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256i best_index = _mm256_set1_epi64x(-1);
    __m256i index = _mm256_setr_epi64x(0, 1, 2, 3);
    const __m256i step = _mm256_set1_epi64x(4);
    for (std::size_t i = 0; i < blocks; i += 4) {
      __m256d s = _mm256_mul_pd(g0, _mm256_loadu_pd(c[0] + i));
      s = _mm256_add_pd(s, _mm256_mul_pd(g1, _mm256_loadu_pd(c[1] + i)));
      s = _mm256_add_pd(s, _mm256_mul_pd(g2, _mm256_loadu_pd(c[2] + i)));
      s = _mm256_add_pd(s, _mm256_mul_pd(g3, _mm256_loadu_pd(c[3] + i)));
      s = _mm256_add_pd(s, _mm256_mul_pd(g4, _mm256_loadu_pd(c[4] + i)));
      s = _mm256_add_pd(s, _mm256_mul_pd(g5, _mm256_loadu_pd(c[5] + i)));
      const __m256d gt = _mm256_cmp_pd(s, best_score, _CMP_GT_OQ);
      best_score = _mm256_blendv_pd(best_score, s, gt);
      best_index = _mm256_castpd_si256(_mm256_blendv_pd(
          _mm256_castsi256_pd(best_index), _mm256_castsi256_pd(index), gt));
      index = _mm256_add_epi64(index, step);
    }
    alignas(32) double lane_score[4];
    alignas(32) long long lane_index[4];
    _mm256_store_pd(lane_score, best_score);
    _mm256_store_si256(reinterpret_cast<__m256i*>(lane_index), best_index);
    for (int j = 0; j < 4; ++j) {
      if (lane_index[j] < 0) continue;
      const auto idx = static_cast<std::size_t>(lane_index[j]);
      if (lane_score[j] > best.score || (lane_score[j] == best.score && idx < best.index)) {
        best.score = lane_score[j];
        best.index = idx;
      }
    }
  }
  for (std::size_t i = blocks; i < n; ++i) {
    double s = gamma[0] * c[0][i];
    s = s + gamma[1] * c[1][i];
    s = s + gamma[2] * c[2][i];
    s = s + gamma[3] * c[3][i];
    s = s + gamma[4] * c[4][i];
    s = s + gamma[5] * c[5][i];
    if (s > best.score) {
      best.score = s;
      best.index = i;
    }
  }
  return best;
}

MinMax minmax(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t blocks = n / 4 * 4;
  MinMax r;
  if (blocks > 0) {
    __m256d lo = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d hi = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < blocks; i += 4) {
      const __m256d v = _mm256_loadu_pd(values.data() + i);
      lo = _mm256_min_pd(lo, v);
      hi = _mm256_max_pd(hi, v);
    }
    alignas(32) double l[4];
    alignas(32) double h[4];
    _mm256_store_pd(l, lo);
    _mm256_store_pd(h, hi);
    for (int j = 0; j < 4; ++j) {
      if (l[j] < r.min) r.min = l[j];
      if (h[j] > r.max) r.max = h[j];
    }
  }
  for (std::size_t i = blocks; i < n; ++i) {
    if (values[i] < r.min) r.min = values[i];
    if (values[i] > r.max) r.max = values[i];
  }
  return r;
}

void rescale(std::span<const double> in, std::span<double> out, double lo, double hi) {
  const double range = hi - lo;
  const std::size_t n = in.size();
  if (!(range > 0.0)) {
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
    return;
  }
  const std::size_t blocks = n / 4 * 4;
  const __m256d vlo = _mm256_set1_pd(lo);
  const __m256d vrange = _mm256_set1_pd(range);
  for (std::size_t i = 0; i < blocks; i += 4) {
    const __m256d v = _mm256_loadu_pd(in.data() + i);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(_mm256_sub_pd(v, vlo), vrange));
  }
  for (std::size_t i = blocks; i < n; ++i) out[i] = (in[i] - lo) / range;
}

}  // namespace rtbsel::simd::avx2
