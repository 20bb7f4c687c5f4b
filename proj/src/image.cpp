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

#include "rtbsel/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "rtbsel/error.hpp"

namespace rtbsel {

GrayImage::GrayImage(int w, int h, double fill)
    : width(w), height(h),
      data(static_cast<std::size_t>(std::max(w, 0)) * std::max(h, 0), fill) {}

void validate(const GrayImage& img) {
  if (img.width < 0 || img.height < 0 ||
      img.data.size() != static_cast<std::size_t>(img.width) * img.height) {
    throw Error(ErrorCode::InvalidArgument, "image buffer does not match dimensions");
  }
  for (double v : img.data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "image intensity outside [0,1]");
    }
  }
}

namespace {

// Skips whitespace and '#' comments between header tokens.
void skip_separators(const std::string& s, std::size_t& pos) {
  while (pos < s.size()) {
    if (s[pos] == '#') {
      while (pos < s.size() && s[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(s[pos]))) {
      ++pos;
    } else {
      break;
    }
  }
}

long read_int(const std::string& s, std::size_t& pos) {
  skip_separators(s, pos);
  std::size_t start = pos;
  while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
  if (start == pos) throw Error(ErrorCode::ImageLoadError, "malformed PGM header");
  return std::stol(s.substr(start, pos - start));
}

}  // namespace

GrayImage parse_pgm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
    throw Error(ErrorCode::UnsupportedFormat, "expected P5 or P2 PGM");
  }
  const bool binary = bytes[1] == '5';
  std::size_t pos = 2;
  const long w = read_int(bytes, pos);
  const long h = read_int(bytes, pos);
  const long maxval = read_int(bytes, pos);
  if (w <= 0 || h <= 0 || maxval <= 0 || maxval > 65535) {
    throw Error(ErrorCode::ImageLoadError, "invalid PGM dimensions or maxval");
  }
  GrayImage img(static_cast<int>(w), static_cast<int>(h));
  const double scale = static_cast<double>(maxval);
  if (binary) {
    ++pos;  // single whitespace after maxval
    const std::size_t bps = maxval < 256 ? 1 : 2;
    if (bytes.size() < pos + img.size() * bps) {
      throw Error(ErrorCode::ImageLoadError, "truncated PGM raster");
    }
    for (std::size_t i = 0; i < img.size(); ++i) {
      long v;
      if (bps == 1) {
        v = static_cast<unsigned char>(bytes[pos + i]);
      } else {
        v = (static_cast<unsigned char>(bytes[pos + 2 * i]) << 8) |
            static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
      }
      img.data[i] = std::min<double>(v, maxval) / scale;
    }
  } else {
    for (std::size_t i = 0; i < img.size(); ++i) {
      const long v = read_int(bytes, pos);
      img.data[i] = std::min<double>(v, maxval) / scale;
    }
  }
  return img;
}

GrayImage load_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ImageLoadError, "cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_pgm(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_pgm(const GrayImage& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ImageLoadError, "cannot write " + path.string());
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  std::string raster(img.size(), '\0');
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double v = std::clamp(img.data[i], 0.0, 1.0);
    raster[i] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
  }
  out.write(raster.data(), static_cast<std::streamsize>(raster.size()));
}

}  // namespace rtbsel
