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

#include <cstdint>

#include "rtbsel/dataset.hpp"

namespace rtbsel {

// Knobs of the synthetic auction generator.
//
// Every ad has a latent bidding strength z ~ N(0, 1). Log bids mix z with
// per-request noise so that their marginal stays N(bid_log_mu, bid_log_sigma^2);
// CTR and creative contrast are drawn through a Gaussian copula correlated
// with z. Within each slot the highest bidder is the ground-truth ad.
struct SyntheticSpec {
  int webpages = 60;
  int min_slots = 2;
  int max_slots = 3;
  int ads = 360;
  int companies = 72;
  int advertisers_per_company = 1;
  int bidders_per_slot = 4;
  int requests = 500;
  int topics = 24;

  double bid_log_mu = 0.0;
  double bid_log_sigma = 0.5;
  // Share of log-bid variance explained by the ad's strength, in [0, 1].
  double bid_strength_share = 0.7;

  double ctr_alpha = 2.0;
  double ctr_beta = 60.0;
  double memorability_alpha = 15.0;
  double memorability_beta = 5.0;

  // Correlations of CTR and creative contrast with the ad strength.
  double bid_ctr_correlation = -0.6;
  double bid_contrast_correlation = -0.6;

  // Probability that a candidate is drawn from the webpage's own topic.
  double topic_affinity = 0.5;

  bool images = true;
  int page_width = 96;
  int page_height = 72;
};

// Throws InvalidSpec when the knobs are out of range or cannot be satisfied.
void validate(const SyntheticSpec& spec);

// Deterministic for a fixed (spec, seed).
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace rtbsel
