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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace rtbsel {

// Row-major single-channel image with intensities in [0, 1].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  GrayImage() = default;
  GrayImage(int w, int h, double fill = 0.0);

  double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return data.size(); }

  bool operator==(const GrayImage&) const = default;
};

// Throws InvalidArgument when the buffer size or an intensity is out of range.
void validate(const GrayImage& img);

// Reads binary (P5) or ASCII (P2) PGM. Samples map to value / maxval.
GrayImage load_pgm(const std::filesystem::path& path);
GrayImage parse_pgm(const std::string& bytes);

// Writes binary P5 with maxval 255.
void save_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace rtbsel
