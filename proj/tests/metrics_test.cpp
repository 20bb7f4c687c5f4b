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

#include "rtbsel/error.hpp"
#include "rtbsel/metrics.hpp"
#include "support/oracles.hpp"

namespace rtbsel {
namespace {

using testing::Rng;

std::vector<BidEntry> slot_bids(std::initializer_list<double> bids) {
  std::vector<BidEntry> out;
  int i = 0;
  for (double b : bids) {
    const std::string adv = "adv" + std::to_string(i++);
    out.push_back({"ad_" + adv, adv, b, b});
  }
  return out;
}

TEST(Gsp, TopBidderPaysSecondBid) {
  const auto bids = slot_bids({5, 3, 2});
  EXPECT_EQ(gsp_payment(bids, "adv0"), 3.0);
  EXPECT_EQ(gsp_payment(bids, "adv1"), 2.0);
  EXPECT_EQ(gsp_payment(bids, "adv2"), 0.0);
}

TEST(Gsp, SingleBidderPaysReserve) {
  const auto bids = slot_bids({4});
  EXPECT_EQ(gsp_payment(bids, "adv0"), 0.0);
  EXPECT_EQ(gsp_payment(bids, "adv0", 0.5), 0.5);
}

TEST(Gsp, TiesRankByAdvertiserId) {
  auto bids = slot_bids({2, 2, 1});
  // adv0 outranks adv1 on the tie; adv1 then pays the last bid.
  EXPECT_EQ(gsp_payments(bids), (std::vector<double>{2.0, 1.0, 0.0}));
}

TEST(Gsp, UnknownAdvertiser) {
  try {
    gsp_payment(slot_bids({1}), "nobody");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownAdvertiser);
  }
}

TEST(Gsp, MatchesSortingOracle) {
  Rng rng(8);
  for (int t = 0; t < 300; ++t) {
    const auto r = testing::random_request(rng, 1, 7);
    const auto& bids = r.per_slot_bids[0];
    EXPECT_EQ(gsp_payments(bids, 0.25), testing::oracle_payments(bids, 0.25));
  }
}

MetricContext hand_context() {
  MetricContext ctx;
  ctx.slots = {{{1.0, 1.5, 0.7, 0.1, 0.2, 0.3}}, {{2.0, 2.0, 0.8, 0.3, 0.4, 0.5}}};
  return ctx;
}

TEST(MetricVector, SingleSlotEqualsEntries) {
  MetricContext ctx;
  ctx.slots = {{{1.0, 1.5, 0.7, 0.1, 0.2, 0.3}}};
  const MetricVector x = compute_metric_vector({{0}}, ctx);
  EXPECT_EQ(x, (MetricVector{{1.0, 0.5, 0.7, 0.1, 0.2, 0.3}}));
}

TEST(MetricVector, TwoSlotsAdd) {
  const MetricVector x = compute_metric_vector({{0, 0}}, hand_context());
  EXPECT_EQ(x[kRevenue], 3.0);
  EXPECT_DOUBLE_EQ(x[kCtr], 0.4);
}

TEST(MetricVector, MissingEntryRejected) {
  EXPECT_THROW(compute_metric_vector({{0, 1}}, hand_context()), Error);
  EXPECT_THROW(compute_metric_vector({{0}}, hand_context()), Error);
}

TEST(MetricVector, MatchesResummationOracle) {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    const auto r = testing::random_request(rng, 3, 4);
    const auto attrs = testing::random_attributes(rng, r);
    const auto ctx = build_metric_context(r, 0.0, attrs.lookup());
    const auto tables = testing::oracle_tables(r, attrs, 0.0);
    for (const auto& row : testing::cartesian_product(r)) {
      EXPECT_EQ(compute_metric_vector(row, ctx), testing::oracle_sum(row, tables));
    }
  }
}

TEST(MetricVector, AdditiveAcrossSlots) {
  Rng rng(10);
  const auto r = testing::random_request(rng, 3, 4);
  const auto attrs = testing::random_attributes(rng, r);
  const auto ctx = build_metric_context(r, 0.0, attrs.lookup());
  for (const auto& row : testing::cartesian_product(r)) {
    MetricVector sum;
    for (std::size_t s = 0; s < row.picks.size(); ++s) {
      const MetricVector part = ctx.slots[s][row.picks[s]].contribution();
      for (std::size_t k = 0; k < kNumMetrics; ++k) sum[k] += part[k];
    }
    EXPECT_EQ(compute_metric_vector(row, ctx), sum);
  }
}

TEST(MetricVector, UtilityNonNegativeWhenValueIsBid) {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    const auto r = testing::random_request(rng, 3, 5);
    const auto attrs = testing::random_attributes(rng, r);
    const auto ctx = build_metric_context(r, 0.0, attrs.lookup());
    for (const auto& row : testing::cartesian_product(r)) {
      EXPECT_GE(compute_metric_vector(row, ctx)[kUtility], 0.0);
    }
  }
}

TEST(ColumnExtrema, SeparableSums) {
  MetricContext ctx;
  ctx.slots = {{{1, 1, 0, 0, 0, 0}, {2, 2, 0, 0, 0, 0}}, {{3, 3, 0, 0, 0, 0}, {5, 5, 0, 0, 0, 0}}};
  const auto e = column_extrema(ctx);
  EXPECT_EQ(e.min[kRevenue], 4.0);
  EXPECT_EQ(e.max[kRevenue], 7.0);
}

TEST(ColumnExtrema, SingleBidderPerSlotIsDegenerate) {
  const auto e = column_extrema(hand_context());
  EXPECT_EQ(e.min, e.max);
}

TEST(ColumnExtrema, EqualsBruteForceOverProduct) {
  Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    const auto r = testing::random_request(rng, 4, 5);
    const auto attrs = testing::random_attributes(rng, r);
    const auto ctx = build_metric_context(r, 0.0, attrs.lookup());
    const auto brute =
        testing::oracle_extrema(testing::cartesian_product(r), testing::oracle_tables(ctx));
    const auto e = column_extrema(ctx);
    EXPECT_EQ(e.min, brute.min);
    EXPECT_EQ(e.max, brute.max);
  }
}

TEST(Normalize, MinMaxAndDegenerate) {
  ColumnExtrema e;
  e.min = {2, 5, 0, 0, 0, 0};
  e.max = {6, 5, 1, 1, 1, 1};
  EXPECT_EQ(normalize(MetricVector{{2, 5, 0, 0, 0, 0}}, e)[0], 0.0);
  EXPECT_EQ(normalize(MetricVector{{4, 5, 0, 0, 0, 0}}, e)[0], 0.5);
  EXPECT_EQ(normalize(MetricVector{{6, 5, 0, 0, 0, 0}}, e)[0], 1.0);
  EXPECT_EQ(normalize(MetricVector{{6, 5, 0, 0, 0, 0}}, e)[1], 0.0);
}

TEST(BuildContext, ValueDefaultsFlowIntoUtility) {
  AuctionRequest r{"r", "p", {slot_bids({5, 3})}};
  r.per_slot_bids[0][0].value = 6.0;
  const auto ctx = build_metric_context(r, 0.0, [](std::size_t, const BidEntry&) {
    return AdAttributes{0.5, 0.1, 0.2, 0.3};
  });
  EXPECT_EQ(ctx.slots[0][0].contribution()[kUtility], 3.0);
  EXPECT_EQ(ctx.slots[0][1].contribution()[kUtility], 3.0);
}

}  // namespace
}  // namespace rtbsel
