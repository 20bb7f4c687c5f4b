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

// Minimum barrier distance saliency. The barrier of a path is the spread
// (max - min) of intensities along it; the distance of a pixel is the
// smallest barrier over 4-connected paths from the image border.

#include "rtbsel/core_model.hpp"
#include "rtbsel/image.hpp"

namespace rtbsel {

inline constexpr int kDefaultMbdPasses = 3;
inline constexpr double kNeutralSaliency = 0.5;

// Distance map with the same dimensions as the source image.
struct DistanceMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
  bool operator==(const DistanceMap&) const = default;
};

using SaliencyMap = DistanceMap;

// Scales ad to the slot by nearest neighbour and pastes it over the page.
GrayImage composite(const GrayImage& page, const GrayImage& ad, const Rect& slot);

// Raster-scan approximation. Passes alternate forward (up/left neighbours)
// and backward (down/right neighbours) scans, starting forward.
DistanceMap mbd_transform(const GrayImage& img, int passes = kDefaultMbdPasses);

// Min-max normalization into [0, 1]; a constant map becomes all zeros.
SaliencyMap to_saliency(const DistanceMap& dist);

double mean_in_rect(const SaliencyMap& map, const Rect& rect);

// Mean saliency inside the slot after compositing the ad into the page.
double slot_saliency(const GrayImage& page, const GrayImage& ad, const Rect& slot,
                     int passes = kDefaultMbdPasses);

}  // namespace rtbsel
