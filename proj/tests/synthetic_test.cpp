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

#include <algorithm>
#include <cmath>

#include "rtbsel/error.hpp"
#include "rtbsel/synthetic.hpp"

namespace rtbsel {
namespace {

SyntheticSpec small_spec() {
  SyntheticSpec s;
  s.webpages = 8;
  s.ads = 60;
  s.companies = 12;
  s.requests = 40;
  s.topics = 4;
  return s;
}

TEST(Synthetic, DeterministicForSeed) {
  const Dataset a = generate_synthetic(small_spec(), 3);
  const Dataset b = generate_synthetic(small_spec(), 3);
  ASSERT_EQ(a.requests.size(), b.requests.size());
  for (std::size_t j = 0; j < a.requests.size(); ++j) {
    EXPECT_EQ(a.requests[j].per_slot_bids, b.requests[j].per_slot_bids);
  }
  for (std::size_t i = 0; i < a.ads.size(); ++i) {
    EXPECT_EQ(a.ads[i].landing_text(), b.ads[i].landing_text());
    EXPECT_EQ(a.ads[i].ctr, b.ads[i].ctr);
    EXPECT_EQ(*a.ads[i].image, *b.ads[i].image);
  }
  const Dataset c = generate_synthetic(small_spec(), 4);
  EXPECT_NE(a.requests[0].per_slot_bids, c.requests[0].per_slot_bids);
}

TEST(Synthetic, GroundTruthHoldsStrictlyHighestBid) {
  const Dataset d = generate_synthetic(small_spec(), 5);
  EXPECT_NO_THROW(validate(d));
  for (const auto& r : d.requests) {
    for (const auto& bids : r.per_slot_bids) {
      ASSERT_FALSE(bids.empty());
      const auto top = std::max_element(bids.begin(), bids.end(),
                                        [](auto& a, auto& b) { return a.bid < b.bid; });
      EXPECT_EQ(std::count_if(bids.begin(), bids.end(),
                              [&](auto& b) { return b.bid == top->bid; }),
                1);
    }
  }
}

TEST(Synthetic, SingleBidderSlots) {
  SyntheticSpec s = small_spec();
  s.bidders_per_slot = 1;
  const Dataset d = generate_synthetic(s, 6);
  for (const auto& r : d.requests)
    for (const auto& bids : r.per_slot_bids) EXPECT_EQ(bids.size(), 1u);
}

TEST(Synthetic, LogNormalBidMedian) {
  SyntheticSpec s;
  s.webpages = 10;
  s.ads = 200;
  s.companies = 40;
  s.bidders_per_slot = 4;
  s.min_slots = s.max_slots = 1;
  s.requests = 2500;  // 10^4 bids
  s.bid_log_mu = 0.0;
  s.bid_log_sigma = 1.0;
  s.images = false;
  const Dataset d = generate_synthetic(s, 7);
  std::vector<double> bids;
  for (const auto& r : d.requests)
    for (const auto& b : r.per_slot_bids[0]) bids.push_back(b.bid);
  ASSERT_EQ(bids.size(), 10000u);
  std::nth_element(bids.begin(), bids.begin() + bids.size() / 2, bids.end());
  EXPECT_NEAR(bids[bids.size() / 2], 1.0, 0.1);
}

TEST(Synthetic, CandidatesMatchSlotShape) {
  const Dataset d = generate_synthetic(small_spec(), 8);
  for (const auto& r : d.requests) {
    const Webpage& page = d.webpage(r.webpage_id);
    for (std::size_t s = 0; s < r.slot_count(); ++s) {
      const Rect& rect = page.slots[s].rect;
      for (const auto& b : r.per_slot_bids[s]) {
        const GrayImage& img = *d.ad(b.ad_id).image;
        EXPECT_EQ(img.width * rect.height, img.height * rect.width);
      }
    }
  }
}

TEST(Synthetic, InvalidSpecRejected) {
  SyntheticSpec s = small_spec();
  s.min_slots = 0;
  EXPECT_THROW(generate_synthetic(s, 1), Error);
  s = small_spec();
  s.bid_ctr_correlation = 1.5;
  EXPECT_THROW(validate(s), Error);
  s = small_spec();
  s.bidders_per_slot = 1000;
  EXPECT_THROW(generate_synthetic(s, 1), Error);
}

}  // namespace
}  // namespace rtbsel
