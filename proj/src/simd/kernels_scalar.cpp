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

#include "rtbsel/simd/kernels.hpp"

namespace rtbsel::simd::scalar {

ArgmaxResult argmax_rank_score(const MetricColumns& cols,
                               const std::array<double, kColumns>& gamma) {
  ArgmaxResult best;
  const auto& c = cols.column;
  for (std::size_t i = 0; i < cols.rows; ++i) {
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
  MinMax r;
  for (double v : values) {
    if (v < r.min) r.min = v;
    if (v > r.max) r.max = v;
  }
  return r;
}

void rescale(std::span<const double> in, std::span<double> out, double lo, double hi) {
  const double range = hi - lo;
  if (!(range > 0.0)) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = 0.0;
    return;
  }
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = (in[i] - lo) / range;
}

}  // namespace rtbsel::simd::scalar
