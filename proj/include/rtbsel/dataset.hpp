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

#include <filesystem>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtbsel/core_model.hpp"
#include "rtbsel/text_topics.hpp"

namespace rtbsel {

// Webpages, ads and auction requests with id lookups. Call reindex() after
// mutating the vectors directly.
struct Dataset {
  std::vector<Webpage> webpages;
  std::vector<Ad> ads;
  std::vector<AuctionRequest> requests;
  // Ad topics read from topics.jsonl; derived by clustering when absent.
  std::optional<TopicAssignment> topics;
  std::string provenance = "loaded";

  void reindex();
  const Webpage& webpage(const Id& id) const;
  const Ad& ad(const Id& id) const;
  bool has_ad(const Id& id) const { return ad_index_.contains(id); }
  bool has_webpage(const Id& id) const { return page_index_.contains(id); }

 private:
  std::unordered_map<Id, std::size_t> page_index_;
  std::unordered_map<Id, std::size_t> ad_index_;
};

// Referential integrity plus every type invariant. Throws on the first problem.
void validate(const Dataset& dataset);

// Reads webpages.jsonl, ads.jsonl, auctions.jsonl and, if present,
// topics.jsonl from root. Image paths are relative to root.
Dataset load_dataset(const std::filesystem::path& root);

// Writes the same files. In-memory images without a path get one under images/.
void save_dataset(const Dataset& dataset, const std::filesystem::path& root);

void save_topics(const TopicAssignment& topics, std::span<const Ad> ads,
                 const std::filesystem::path& file);

}  // namespace rtbsel
