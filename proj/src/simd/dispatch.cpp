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

#include <atomic>
#include <cstdlib>
#include <string>

#include "rtbsel/error.hpp"
#include "rtbsel/simd/kernels.hpp"

namespace rtbsel::simd {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "unknown";
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(RTBSEL_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

namespace {

struct KernelTable {
  ArgmaxRankFn argmax_rank_score;
  MinMaxFn minmax;
  RescaleFn rescale;
};

KernelTable table_for(Isa isa) {
#if defined(RTBSEL_HAVE_AVX2)
  if (isa == Isa::kAvx2) return {avx2::argmax_rank_score, avx2::minmax, avx2::rescale};
#endif
  (void)isa;
  return {scalar::argmax_rank_score, scalar::minmax, scalar::rescale};
}

Isa detect() {
  if (const char* env = std::getenv("RTBSEL_SIMD"); env && std::string(env) == "scalar") {
    return Isa::kScalar;
  }
  return cpu_supports(Isa::kAvx2) ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!cpu_supports(isa)) {
    throw Error(ErrorCode::InvalidArgument,
                "CPU does not support " + std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

ArgmaxResult argmax_rank_score(const MetricColumns& cols,
                               const std::array<double, kColumns>& gamma) {
  return table_for(active_isa()).argmax_rank_score(cols, gamma);
}

MinMax minmax(std::span<const double> values) {
  return table_for(active_isa()).minmax(values);
}

void rescale(std::span<const double> in, std::span<double> out, double lo, double hi) {
  table_for(active_isa()).rescale(in, out, lo, hi);
}

}  // namespace rtbsel::simd
