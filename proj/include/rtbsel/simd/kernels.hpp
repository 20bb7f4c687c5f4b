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

// Data-parallel inner loops. Each kernel has a scalar reference and, where
// the target allows, an AVX2 variant; the dispatched entry points pick one at
// first use. Variants are required to produce bitwise-identical results:
// the AVX2 code performs the same IEEE operations in the same order per
// element, with no fused multiply-add.

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace rtbsel::simd {

inline constexpr std::size_t kColumns = 6;
inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

// Structure-of-arrays view of n rows of six normalized metrics.
struct MetricColumns {
  std::array<const double*, kColumns> column{};
  std::size_t rows = 0;
};

struct ArgmaxResult {
  std::size_t index = kNoIndex;
  double score = -std::numeric_limits<double>::infinity();
};

struct MinMax {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

// score(i) = ((((g0*x0 + g1*x1) + g2*x2) + g3*x3) + g4*x4) + g5*x5.
// Returns the first index attaining the maximum score.
using ArgmaxRankFn = ArgmaxResult (*)(const MetricColumns&, const std::array<double, kColumns>&);
// Min and max of a non-empty span.
using MinMaxFn = MinMax (*)(std::span<const double>);
// out[i] = (in[i] - lo) / (hi - lo), or 0 everywhere when hi == lo.
using RescaleFn = void (*)(std::span<const double>, std::span<double>, double lo, double hi);

namespace scalar {
ArgmaxResult argmax_rank_score(const MetricColumns& cols, const std::array<double, kColumns>& gamma);
MinMax minmax(std::span<const double> values);
void rescale(std::span<const double> in, std::span<double> out, double lo, double hi);
}  // namespace scalar

#if defined(RTBSEL_HAVE_AVX2)
namespace avx2 {
ArgmaxResult argmax_rank_score(const MetricColumns& cols, const std::array<double, kColumns>& gamma);
MinMax minmax(std::span<const double> values);
void rescale(std::span<const double> in, std::span<double> out, double lo, double hi);
}  // namespace avx2
#endif

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);
bool cpu_supports(Isa isa);

// ISA used by the dispatched functions. Defaults to the best supported one;
// RTBSEL_SIMD=scalar in the environment forces the reference path.
Isa active_isa();
// Overrides the selection. Throws InvalidArgument if the CPU lacks the ISA.
void set_active_isa(Isa isa);

ArgmaxResult argmax_rank_score(const MetricColumns& cols, const std::array<double, kColumns>& gamma);
MinMax minmax(std::span<const double> values);
void rescale(std::span<const double> in, std::span<double> out, double lo, double hi);

}  // namespace rtbsel::simd
