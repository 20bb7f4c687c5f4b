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

#include "rtbsel/saliency_mbd.hpp"

#include <algorithm>
#include <limits>

#include "rtbsel/simd/kernels.hpp"

namespace rtbsel {

namespace {

void check_slot(const GrayImage& page, const Rect& slot) {
  if (slot.width <= 0 || slot.height <= 0 || slot.x < 0 || slot.y < 0 ||
      slot.x + slot.width > page.width || slot.y + slot.height > page.height) {
    throw Error(ErrorCode::SlotOutOfBounds, "slot rectangle outside the page");
  }
}

}  // namespace

GrayImage composite(const GrayImage& page, const GrayImage& ad, const Rect& slot) {
  check_slot(page, slot);
  if (ad.width <= 0 || ad.height <= 0) {
    throw Error(ErrorCode::InvalidArgument, "ad image is empty");
  }
  GrayImage out = page;
  for (int y = 0; y < slot.height; ++y) {
    const int sy = static_cast<int>(static_cast<long long>(y) * ad.height / slot.height);
    for (int x = 0; x < slot.width; ++x) {
      const int sx = static_cast<int>(static_cast<long long>(x) * ad.width / slot.width);
      out.at(slot.x + x, slot.y + y) = ad.at(sx, sy);
    }
  }
  return out;
}

DistanceMap mbd_transform(const GrayImage& img, int passes) {
  if (img.width < 2 || img.height < 2) {
    throw Error(ErrorCode::DegenerateImage, "MBD needs at least a 2x2 image");
  }
  if (passes < 1) throw Error(ErrorCode::InvalidArgument, "passes must be >= 1");
  const int w = img.width;
  const int h = img.height;
  const auto& I = img.data;
  DistanceMap d{w, h, std::vector<double>(img.size(), std::numeric_limits<double>::infinity())};
  auto& D = d.values;
  // Running max (U) and min (L) along the current best path of each pixel.
  std::vector<double> U = I;
  std::vector<double> L = I;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) D[static_cast<std::size_t>(y) * w + x] = 0.0;
    }
  }

  auto relax = [&](std::size_t p, std::size_t q) {
    const double u = std::max(U[q], I[p]);
    const double l = std::min(L[q], I[p]);
    const double cost = u - l;
    if (cost < D[p]) {
      D[p] = cost;
      U[p] = u;
      L[p] = l;
    }
  };

  for (int pass = 0; pass < passes; ++pass) {
    if (pass % 2 == 0) {
      for (int y = 1; y < h - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          relax(p, p - w);
          relax(p, p - 1);
        }
      }
    } else {
      for (int y = h - 2; y >= 1; --y) {
        for (int x = w - 2; x >= 1; --x) {
          const std::size_t p = static_cast<std::size_t>(y) * w + x;
          relax(p, p + w);
          relax(p, p + 1);
        }
      }
    }
  }
  return d;
}

SaliencyMap to_saliency(const DistanceMap& dist) {
  SaliencyMap out{dist.width, dist.height, std::vector<double>(dist.values.size(), 0.0)};
  if (dist.values.empty()) return out;
  const simd::MinMax mm = simd::minmax(dist.values);
  simd::rescale(dist.values, out.values, mm.min, mm.max);
  return out;
}

double mean_in_rect(const SaliencyMap& map, const Rect& rect) {
  if (rect.width <= 0 || rect.height <= 0 || rect.x < 0 || rect.y < 0 ||
      rect.x + rect.width > map.width || rect.y + rect.height > map.height) {
    throw Error(ErrorCode::SlotOutOfBounds, "rectangle outside the saliency map");
  }
  double sum = 0.0;
  for (int y = rect.y; y < rect.y + rect.height; ++y) {
    for (int x = rect.x; x < rect.x + rect.width; ++x) sum += map.at(x, y);
  }
  return sum / (static_cast<double>(rect.width) * rect.height);
}

double slot_saliency(const GrayImage& page, const GrayImage& ad, const Rect& slot, int passes) {
  const GrayImage combined = composite(page, ad, slot);
  const SaliencyMap map = to_saliency(mbd_transform(combined, passes));
  return std::clamp(mean_in_rect(map, slot), 0.0, 1.0);
}

}  // namespace rtbsel
