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

#include <cmath>

#include "rtbsel/error.hpp"
#include "rtbsel/saliency_mbd.hpp"
#include "support/oracles.hpp"

namespace rtbsel {
namespace {

using testing::Rng;

TEST(Composite, SameSizeIsDirectCopy) {
  GrayImage page(6, 6, 0.5);
  GrayImage ad(2, 3);
  for (std::size_t i = 0; i < ad.size(); ++i) ad.data[i] = i / 10.0;
  const GrayImage out = composite(page, ad, {1, 2, 2, 3});
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 6; ++x) {
      const bool inside = x >= 1 && x < 3 && y >= 2 && y < 5;
      EXPECT_EQ(out.at(x, y), inside ? ad.at(x - 1, y - 2) : 0.5);
    }
  }
}

TEST(Composite, NearestNeighbourUpscale) {
  GrayImage page(4, 4, 0.0);
  GrayImage ad(2, 2);
  ad.data = {0.1, 0.2, 0.3, 0.4};
  const GrayImage out = composite(page, ad, {0, 0, 4, 4});
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) EXPECT_EQ(out.at(x, y), ad.at(x / 2, y / 2));
  }
}

TEST(Composite, OutOfBoundsSlotRejected) {
  GrayImage page(4, 4);
  GrayImage ad(2, 2);
  try {
    composite(page, ad, {3, 3, 2, 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SlotOutOfBounds);
  }
}

TEST(Mbd, ConstantImageIsZero) {
  const DistanceMap d = mbd_transform(GrayImage(7, 5, 0.3));
  for (double v : d.values) EXPECT_EQ(v, 0.0);
}

TEST(Mbd, TooSmallImageRejected) {
  EXPECT_THROW(mbd_transform(GrayImage(1, 5)), Error);
}

TEST(Mbd, BordersZeroAndValuesNonNegative) {
  Rng rng(1);
  for (int t = 0; t < 20; ++t) {
    const GrayImage img = testing::random_dyadic_image(rng, 9, 7);
    const DistanceMap d = mbd_transform(img);
    for (int y = 0; y < 7; ++y) {
      for (int x = 0; x < 9; ++x) {
        EXPECT_GE(d.at(x, y), 0.0);
        if (x == 0 || y == 0 || x == 8 || y == 6) {
          EXPECT_EQ(d.at(x, y), 0.0);
        }
      }
    }
  }
}

TEST(Mbd, ExtraPassesNeverIncrease) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    const GrayImage img = testing::random_dyadic_image(rng, 8, 8);
    DistanceMap prev = mbd_transform(img, 1);
    for (int p = 2; p <= 6; ++p) {
      const DistanceMap cur = mbd_transform(img, p);
      for (std::size_t i = 0; i < cur.values.size(); ++i) EXPECT_LE(cur.values[i], prev.values[i]);
      prev = cur;
    }
  }
}

TEST(Mbd, InversionInvariantOnDyadicImages) {
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    const GrayImage img = testing::random_dyadic_image(rng, 8, 8);
    EXPECT_EQ(mbd_transform(img), mbd_transform(testing::inverted(img)));
  }
}

TEST(Mbd, NeverBelowExactDistanceAndCloseOnAverage) {
  Rng rng(4);
  double total = 0.0;
  int count = 0;
  for (int t = 0; t < 30; ++t) {
    const GrayImage img = testing::random_dyadic_image(rng, 8, 8);
    const DistanceMap d = mbd_transform(img);
    const auto exact = testing::exact_mbd(img);
    for (std::size_t i = 0; i < exact.size(); ++i) {
      EXPECT_GE(d.values[i], exact[i]);
      total += std::abs(d.values[i] - exact[i]);
      ++count;
    }
  }
  EXPECT_LE(total / count, 0.05);
}

TEST(Mbd, ExactOracleOnHandImage) {
  // A bright ring around a dark centre: the centre is walled in by 1.0.
  GrayImage img(5, 5, 0.0);
  for (int i = 1; i < 4; ++i) img.at(i, 1) = img.at(i, 3) = img.at(1, i) = img.at(3, i) = 1.0;
  const auto exact = testing::exact_mbd(img);
  EXPECT_EQ(exact[2 * 5 + 2], 1.0);
  EXPECT_EQ(exact[1 * 5 + 1], 1.0);
  EXPECT_EQ(mbd_transform(img).at(2, 2), 1.0);
}

TEST(ToSaliency, MinMaxScaling) {
  const DistanceMap d{3, 1, {0.0, 2.0, 4.0}};
  EXPECT_EQ(to_saliency(d).values, (std::vector<double>{0.0, 0.5, 1.0}));
}

TEST(ToSaliency, ConstantMapBecomesZero) {
  const DistanceMap d{2, 2, {3.0, 3.0, 3.0, 3.0}};
  for (double v : to_saliency(d).values) EXPECT_EQ(v, 0.0);
}

TEST(ToSaliency, RandomMapsStayInUnitInterval) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(-3.0, 7.0);
  for (int t = 0; t < 20; ++t) {
    DistanceMap d{13, 3, std::vector<double>(39)};
    for (auto& v : d.values) v = u(rng);
    for (double v : to_saliency(d).values) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(MeanInRect, ConstantValue) {
  const SaliencyMap m{4, 4, std::vector<double>(16, 0.25)};
  EXPECT_EQ(mean_in_rect(m, {1, 1, 2, 2}), 0.25);
}

TEST(SlotSaliency, FlatPageAndAdGiveZero) {
  const GrayImage page(16, 16, 0.6);
  EXPECT_EQ(slot_saliency(page, GrayImage(4, 4, 0.6), {6, 6, 4, 4}), 0.0);
}

TEST(SlotSaliency, HighContrastAdBeatsBlendedAd) {
  GrayImage page(16, 16, 0.9);
  GrayImage contrast(4, 4, 0.05);
  GrayImage blended(4, 4, 0.85);
  const Rect slot{6, 6, 4, 4};
  // A little page texture so the blended map is not constant.
  page.at(2, 2) = 0.7;
  const double hi = slot_saliency(page, contrast, slot);
  const double lo = slot_saliency(page, blended, slot);
  EXPECT_GT(hi, lo);
  EXPECT_GE(lo, 0.0);
  EXPECT_LE(hi, 1.0);
}

TEST(SlotSaliency, IndependentOfOtherSlots) {
  Rng rng(6);
  GrayImage page = testing::random_dyadic_image(rng, 24, 12);
  const GrayImage ad = testing::random_dyadic_image(rng, 4, 4);
  const Rect left{2, 4, 4, 4}, right{16, 4, 4, 4};
  const double before = slot_saliency(page, ad, left);
  // Only the slot being scored is composited, so a different ad elsewhere
  // is simply not part of the input.
  const GrayImage other = testing::random_dyadic_image(rng, 4, 4);
  (void)slot_saliency(page, other, right);
  EXPECT_EQ(slot_saliency(page, ad, left), before);
}

TEST(Pgm, RoundTripAndAscii) {
  GrayImage img(3, 2);
  img.data = {0.0, 1.0, 128 / 255.0, 1 / 255.0, 254 / 255.0, 200 / 255.0};
  const auto path = std::filesystem::temp_directory_path() / "rtbsel_roundtrip.pgm";
  save_pgm(img, path);
  EXPECT_EQ(load_pgm(path), img);
  std::filesystem::remove(path);
  const GrayImage ascii = parse_pgm("P2\n# c\n2 1\n4\n0 4\n");
  EXPECT_EQ(ascii.data, (std::vector<double>{0.0, 1.0}));
}

TEST(Pgm, ColourFormatRejected) {
  try {
    parse_pgm("P6\n1 1\n255\nabc");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnsupportedFormat);
  }
}

}  // namespace
}  // namespace rtbsel
