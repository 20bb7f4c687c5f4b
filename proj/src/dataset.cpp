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

#include "rtbsel/dataset.hpp"

#include <fstream>

#include "json.hpp"

#include "rtbsel/image.hpp"

namespace rtbsel {

using nlohmann::json;

void Dataset::reindex() {
  page_index_.clear();
  ad_index_.clear();
  for (std::size_t i = 0; i < webpages.size(); ++i) {
    if (!page_index_.emplace(webpages[i].id, i).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate webpage id " + webpages[i].id);
    }
  }
  for (std::size_t i = 0; i < ads.size(); ++i) {
    if (!ad_index_.emplace(ads[i].id, i).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate ad id " + ads[i].id);
    }
  }
}

const Webpage& Dataset::webpage(const Id& id) const {
  auto it = page_index_.find(id);
  if (it == page_index_.end()) throw Error(ErrorCode::DanglingReference, "unknown webpage " + id);
  return webpages[it->second];
}

const Ad& Dataset::ad(const Id& id) const {
  auto it = ad_index_.find(id);
  if (it == ad_index_.end()) throw Error(ErrorCode::DanglingReference, "unknown ad " + id);
  return ads[it->second];
}

void validate(const Dataset& d) {
  for (const auto& page : d.webpages) validate(page);
  for (const auto& ad : d.ads) validate(ad);
  for (const auto& req : d.requests) {
    const Webpage& page = d.webpage(req.webpage_id);
    for (const auto& bids : req.per_slot_bids) {
      for (const auto& b : bids) {
        const Ad& ad = d.ad(b.ad_id);
        if (ad.advertiser_id != b.advertiser_id) {
          throw Error(ErrorCode::DanglingReference,
                      "request " + req.id + " bid advertiser differs from ad " + ad.id);
        }
      }
    }
    validate_request(req, page);
  }
}

namespace {

// Location prefix for parse errors: "file:line".
struct Where {
  std::string file;
  std::size_t line = 0;
  std::string str() const { return file + ":" + std::to_string(line); }
};

template <typename T>
T field(const json& obj, const char* name, const Where& at) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw Error(ErrorCode::ParseError, at.str() + ": missing field '" + name + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ParseError, at.str() + ": bad type for field '" + name + "'");
  }
}

template <typename T>
std::optional<T> optional_field(const json& obj, const char* name, const Where& at) {
  auto it = obj.find(name);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  return field<T>(obj, name, at);
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, bool required, Fn&& fn) {
  std::ifstream in(path);
  if (!in) {
    if (!required) return;
    throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  }
  Where at{path.filename().string(), 0};
  for (std::string line; std::getline(in, line);) {
    ++at.line;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, at.str() + ": " + e.what());
    }
    if (!obj.is_object()) throw Error(ErrorCode::ParseError, at.str() + ": expected an object");
    fn(obj, at);
  }
}

std::shared_ptr<const GrayImage> load_image(const std::filesystem::path& root,
                                            const std::string& rel) {
  try {
    return std::make_shared<const GrayImage>(load_pgm(root / rel));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::UnsupportedFormat) throw;
    throw Error(ErrorCode::ImageLoadError, e.what());
  }
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& root) {
  Dataset d;
  for_each_line(root / "webpages.jsonl", true, [&](const json& o, const Where& at) {
    Webpage p;
    p.id = field<std::string>(o, "id", at);
    p.url = optional_field<std::string>(o, "url", at).value_or("");
    p.title = optional_field<std::string>(o, "title", at).value_or("");
    p.keywords = optional_field<std::string>(o, "keywords", at).value_or("");
    p.description = optional_field<std::string>(o, "description", at).value_or("");
    p.content = optional_field<std::string>(o, "content", at).value_or("");
    if (auto snap = optional_field<std::string>(o, "snapshot", at)) {
      p.snapshot_path = *snap;
      p.snapshot = load_image(root, *snap);
    }
    const json slots = field<json>(o, "slots", at);
    if (!slots.is_array()) throw Error(ErrorCode::ParseError, at.str() + ": slots must be a list");
    for (const auto& s : slots) {
      AdSlot slot;
      slot.id = field<std::string>(s, "id", at);
      slot.rect = {field<int>(s, "x", at), field<int>(s, "y", at), field<int>(s, "w", at),
                   field<int>(s, "h", at)};
      p.slots.push_back(std::move(slot));
    }
    d.webpages.push_back(std::move(p));
  });
  for_each_line(root / "ads.jsonl", true, [&](const json& o, const Where& at) {
    Ad a;
    a.id = field<std::string>(o, "id", at);
    a.advertiser_id = field<std::string>(o, "advertiser_id", at);
    a.company_domain = field<std::string>(o, "company_domain", at);
    a.landing_title = optional_field<std::string>(o, "landing_title", at).value_or("");
    a.landing_keywords = optional_field<std::string>(o, "landing_keywords", at).value_or("");
    a.landing_description = optional_field<std::string>(o, "landing_description", at).value_or("");
    if (auto img = optional_field<std::string>(o, "image", at)) {
      a.image_path = *img;
      a.image = load_image(root, *img);
    }
    a.memorability = field<double>(o, "memorability", at);
    a.ctr = field<double>(o, "ctr", at);
    a.value = optional_field<double>(o, "value", at);
    d.ads.push_back(std::move(a));
  });
  d.reindex();
  for_each_line(root / "auctions.jsonl", true, [&](const json& o, const Where& at) {
    AuctionRequest r;
    r.id = field<std::string>(o, "id", at);
    r.webpage_id = field<std::string>(o, "webpage_id", at);
    if (!d.has_webpage(r.webpage_id)) {
      throw Error(ErrorCode::DanglingReference,
                  at.str() + ": unknown webpage '" + r.webpage_id + "'");
    }
    const json slots = field<json>(o, "slots", at);
    if (!slots.is_array()) throw Error(ErrorCode::ParseError, at.str() + ": slots must be a list");
    for (const auto& list : slots) {
      if (!list.is_array()) {
        throw Error(ErrorCode::ParseError, at.str() + ": each slot must be a list of bids");
      }
      std::vector<BidEntry> bids;
      for (const auto& b : list) {
        BidEntry e;
        e.ad_id = field<std::string>(b, "ad_id", at);
        e.bid = field<double>(b, "bid", at);
        if (!d.has_ad(e.ad_id)) {
          throw Error(ErrorCode::DanglingReference, at.str() + ": unknown ad '" + e.ad_id + "'");
        }
        const Ad& ad = d.ad(e.ad_id);
        e.advertiser_id = ad.advertiser_id;
        e.value = ad.value.value_or(e.bid);
        bids.push_back(std::move(e));
      }
      r.per_slot_bids.push_back(std::move(bids));
    }
    d.requests.push_back(std::move(r));
  });
  if (std::filesystem::exists(root / "topics.jsonl")) {
    TopicAssignment topics;
    for_each_line(root / "topics.jsonl", false, [&](const json& o, const Where& at) {
      const auto ad_id = field<std::string>(o, "ad_id", at);
      if (!d.has_ad(ad_id)) {
        throw Error(ErrorCode::DanglingReference, at.str() + ": unknown ad '" + ad_id + "'");
      }
      topics.by_ad[ad_id] = field<int>(o, "topic", at);
    });
    d.topics = std::move(topics);
  }
  validate(d);
  return d;
}

namespace {

void write_lines(const std::filesystem::path& path, const std::vector<json>& rows) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  for (const auto& r : rows) out << r.dump() << '\n';
}

}  // namespace

void save_topics(const TopicAssignment& topics, std::span<const Ad> ads,
                 const std::filesystem::path& file) {
  std::vector<json> rows;
  for (const auto& ad : ads) {
    auto it = topics.by_ad.find(ad.id);
    if (it == topics.by_ad.end()) continue;
    rows.push_back({{"ad_id", ad.id}, {"advertiser_id", ad.advertiser_id}, {"topic", it->second}});
  }
  write_lines(file, rows);
}

void save_dataset(const Dataset& d, const std::filesystem::path& root) {
  std::filesystem::create_directories(root);
  auto image_path = [&](const std::string& existing, const std::string& fallback,
                        const std::shared_ptr<const GrayImage>& img) -> json {
    if (!img) return nullptr;
    const std::string rel = existing.empty() ? fallback : existing;
    std::filesystem::create_directories((root / rel).parent_path());
    save_pgm(*img, root / rel);
    return rel;
  };

  std::vector<json> pages;
  for (const auto& p : d.webpages) {
    json slots = json::array();
    for (const auto& s : p.slots) {
      slots.push_back({{"id", s.id}, {"x", s.rect.x}, {"y", s.rect.y}, {"w", s.rect.width},
                       {"h", s.rect.height}});
    }
    pages.push_back({{"id", p.id},
                     {"url", p.url},
                     {"title", p.title},
                     {"keywords", p.keywords},
                     {"description", p.description},
                     {"content", p.content},
                     {"snapshot", image_path(p.snapshot_path, "images/page_" + p.id + ".pgm", p.snapshot)},
                     {"slots", slots}});
  }
  write_lines(root / "webpages.jsonl", pages);

  std::vector<json> ads;
  for (const auto& a : d.ads) {
    json o = {{"id", a.id},
              {"advertiser_id", a.advertiser_id},
              {"company_domain", a.company_domain},
              {"landing_title", a.landing_title},
              {"landing_keywords", a.landing_keywords},
              {"landing_description", a.landing_description},
              {"image", image_path(a.image_path, "images/ad_" + a.id + ".pgm", a.image)},
              {"memorability", a.memorability},
              {"ctr", a.ctr}};
    if (a.value) o["value"] = *a.value;
    ads.push_back(std::move(o));
  }
  write_lines(root / "ads.jsonl", ads);

  std::vector<json> auctions;
  for (const auto& r : d.requests) {
    json slots = json::array();
    for (const auto& bids : r.per_slot_bids) {
      json list = json::array();
      for (const auto& b : bids) list.push_back({{"ad_id", b.ad_id}, {"bid", b.bid}});
      slots.push_back(std::move(list));
    }
    auctions.push_back({{"id", r.id}, {"webpage_id", r.webpage_id}, {"slots", slots}});
  }
  write_lines(root / "auctions.jsonl", auctions);

  if (d.topics) save_topics(*d.topics, d.ads, root / "topics.jsonl");
}

}  // namespace rtbsel
