// Copyright 2026 The Relgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relgraph/dataset.h"

#include <algorithm>
#include <array>
#include <numeric>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "relgraph/errors.h"
#include "relgraph/file_util.h"
#include "relgraph/rng.h"
#include "relgraph/text_util.h"

namespace relgraph {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Dictionary

Dictionary::Dictionary(std::vector<std::string> names)
    : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    const int id = static_cast<int>(i);
    if (!index_.emplace(names_[i], id).second) {
      throw InvalidArgument("duplicate dictionary name '" + names_[i] + "'");
    }
    folded_index_.emplace(ToLowerAscii(names_[i]), id);
  }
}

const std::string& Dictionary::Name(int index) const {
  if (!Contains(index)) {
    throw BoundsError("dictionary index " + std::to_string(index) +
                      " out of range [0, " + std::to_string(names_.size()) +
                      ")");
  }
  return names_[static_cast<std::size_t>(index)];
}

std::optional<int> Dictionary::Find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) {
    return it->second;
  }
  if (auto it = folded_index_.find(ToLowerAscii(name));
      it != folded_index_.end()) {
    return it->second;
  }
  return std::nullopt;
}

int Dictionary::Index(std::string_view name) const {
  if (auto id = Find(name)) return *id;
  throw LookupError("name '" + std::string(name) + "' not in dictionary");
}

// ---------------------------------------------------------------------------
// DatasetIndex

DatasetIndex::DatasetIndex(Dictionary objects, Dictionary predicates)
    : objects_(std::move(objects)), predicates_(std::move(predicates)) {}

const ImageAnnotations* DatasetIndex::Find(std::string_view image_id) const {
  auto it = std::lower_bound(
      images_.begin(), images_.end(), image_id,
      [](const ImageAnnotations& a, std::string_view id) {
        return a.image_id < id;
      });
  if (it == images_.end() || it->image_id != image_id) return nullptr;
  return &*it;
}

std::size_t DatasetIndex::RelationshipCount() const {
  std::size_t n = 0;
  for (const auto& img : images_) n += img.relationships.size();
  return n;
}

void DatasetIndex::AddImage(ImageAnnotations image) {
  auto check_object = [&](const ObjectInstance& o) {
    if (!objects_.Contains(o.category_id)) {
      throw BoundsError("image '" + image.image_id + "': category id " +
                        std::to_string(o.category_id) + " out of range");
    }
  };
  for (const auto& o : image.objects) check_object(o);
  for (const auto& r : image.relationships) {
    check_object(r.subject);
    check_object(r.object);
    if (!predicates_.Contains(r.predicate_id)) {
      throw BoundsError("image '" + image.image_id + "': predicate id " +
                        std::to_string(r.predicate_id) + " out of range");
    }
  }
  auto it = std::lower_bound(
      images_.begin(), images_.end(), image.image_id,
      [](const ImageAnnotations& a, const std::string& id) {
        return a.image_id < id;
      });
  if (it != images_.end() && it->image_id == image.image_id) {
    throw InvalidArgument("duplicate image id '" + image.image_id + "'");
  }
  images_.insert(it, std::move(image));
}

DatasetIndex DatasetIndex::Subset(
    const std::vector<std::string>& image_ids) const {
  DatasetIndex out(objects_, predicates_);
  for (const auto& id : image_ids) {
    if (const auto* img = Find(id)) out.AddImage(*img);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annotation parsing

namespace {

std::string RecordContext(const std::string& image, std::size_t ordinal) {
  return "image '" + image + "', record " + std::to_string(ordinal);
}

int ReadIndexField(const json& obj, const char* field, const std::string& ctx) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    throw ParseError(ctx + ": missing field '" + field + "'");
  }
  if (!it->is_number_integer()) {
    throw ParseError(ctx + ": field '" + field + "' is not an integer");
  }
  return it->get<int>();
}

// VRD stores [ymin, ymax, xmin, xmax].
BoundingBox ReadVrdBox(const json& obj, const std::string& ctx) {
  auto it = obj.find("bbox");
  if (it == obj.end() || !it->is_array() || it->size() != 4) {
    throw ParseError(ctx + ": 'bbox' must be an array of 4 numbers");
  }
  std::array<double, 4> v{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!(*it)[i].is_number()) {
      throw ParseError(ctx + ": 'bbox' must be an array of 4 numbers");
    }
    v[i] = (*it)[i].get<double>();
  }
  try {
    return BoundingBox(v[2], v[0], v[3], v[1]);
  } catch (const InvalidArgument& e) {
    throw ParseError(ctx + ": " + e.what());
  }
}

struct InstanceKey {
  int category;
  double x0, y0, x1, y1;
  auto operator<=>(const InstanceKey&) const = default;
};

}  // namespace

DatasetIndex LoadAnnotations(std::string_view json_text, Dictionary objects,
                             Dictionary predicates, SourceSplit origin) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("annotations: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("annotations: top level must be an object");
  }
  DatasetIndex index(std::move(objects), std::move(predicates));
  for (const auto& [image_id, records] : doc.items()) {
    if (!records.is_array()) {
      throw ParseError("image '" + image_id + "': expected a list of records");
    }
    ImageAnnotations img;
    img.image_id = image_id;
    img.origin = origin;
    std::map<InstanceKey, std::size_t> seen;

    auto intern = [&](const json& rec, const char* role,
                      const std::string& ctx) -> ObjectInstance {
      auto it = rec.find(role);
      if (it == rec.end() || !it->is_object()) {
        throw ParseError(ctx + ": missing object field '" + role + "'");
      }
      const std::string role_ctx = ctx + " " + role;
      const int category = ReadIndexField(*it, "category", role_ctx);
      if (!index.objects().Contains(category)) {
        throw BoundsError(role_ctx + ": category " + std::to_string(category) +
                          " out of range [0, " +
                          std::to_string(index.objects().size()) + ")");
      }
      const BoundingBox box = ReadVrdBox(*it, role_ctx);
      const InstanceKey key{category, box.x_min(), box.y_min(), box.x_max(),
                            box.y_max()};
      if (auto found = seen.find(key); found != seen.end()) {
        return img.objects[found->second];
      }
      ObjectInstance inst{static_cast<int>(img.objects.size()), category, box,
                          1.0};
      seen.emplace(key, img.objects.size());
      img.objects.push_back(inst);
      return inst;
    };

    for (std::size_t r = 0; r < records.size(); ++r) {
      const json& rec = records[r];
      const std::string ctx = RecordContext(image_id, r);
      if (!rec.is_object()) throw ParseError(ctx + ": record is not an object");
      const int predicate = ReadIndexField(rec, "predicate", ctx);
      if (!index.predicates().Contains(predicate)) {
        throw BoundsError(ctx + ": predicate " + std::to_string(predicate) +
                          " out of range [0, " +
                          std::to_string(index.predicates().size()) + ")");
      }
      RelationshipAnnotation rel;
      rel.subject = intern(rec, "subject", ctx);
      rel.object = intern(rec, "object", ctx);
      rel.predicate_id = predicate;
      img.relationships.push_back(rel);
    }
    index.AddImage(std::move(img));
  }
  return index;
}

DatasetIndex LoadAnnotationsFile(const std::filesystem::path& path,
                                 Dictionary objects, Dictionary predicates,
                                 SourceSplit origin) {
  const std::string text = ReadTextFile(path);
  try {
    return LoadAnnotations(text, std::move(objects), std::move(predicates),
                           origin);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string ExportAnnotations(const DatasetIndex& index) {
  auto box = [](const BoundingBox& b) {
    return json::array({b.y_min(), b.y_max(), b.x_min(), b.x_max()});
  };
  json doc = json::object();
  for (const auto& img : index.images()) {
    json records = json::array();
    for (const auto& r : img.relationships) {
      records.push_back({
          {"predicate", r.predicate_id},
          {"subject",
           {{"category", r.subject.category_id}, {"bbox", box(r.subject.bbox)}}},
          {"object",
           {{"category", r.object.category_id}, {"bbox", box(r.object.bbox)}}},
      });
    }
    doc[img.image_id] = std::move(records);
  }
  return doc.dump();
}

DatasetIndex Merge(const DatasetIndex& a, const DatasetIndex& b) {
  if (!(a.objects() == b.objects()) || !(a.predicates() == b.predicates())) {
    throw InvalidArgument("cannot merge indexes with different dictionaries");
  }
  DatasetIndex out = a;
  for (const auto& img : b.images()) out.AddImage(img);
  return out;
}

// ---------------------------------------------------------------------------
// Dictionaries

std::string DictionaryToJson(const Dictionary& dict) {
  return json{{"names", dict.names()}}.dump(2);
}

Dictionary DictionaryFromJson(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("dictionary: ") + e.what());
  }
  const json* names = &doc;
  if (doc.is_object()) {
    auto it = doc.find("names");
    if (it == doc.end()) throw ParseError("dictionary: missing 'names'");
    names = &*it;
  }
  if (!names->is_array()) {
    throw ParseError("dictionary: 'names' must be an array of strings");
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names->size(); ++i) {
    if (!(*names)[i].is_string()) {
      throw ParseError("dictionary: /names/" + std::to_string(i) +
                       " is not a string");
    }
    out.push_back((*names)[i].get<std::string>());
  }
  return Dictionary(std::move(out));
}

void ExportDictionary(const Dictionary& dict,
                      const std::filesystem::path& path) {
  WriteTextAtomically(path, DictionaryToJson(dict) + "\n");
}

Dictionary ImportDictionary(const std::filesystem::path& path) {
  const std::string text = ReadTextFile(path);
  try {
    return DictionaryFromJson(text);
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Splitting

namespace {

template <std::size_t N>
std::array<std::size_t, N> LargestRemainder(
    std::size_t n, const std::array<std::size_t, N>& weights) {
  const std::size_t total =
      std::accumulate(weights.begin(), weights.end(), std::size_t{0});
  std::array<std::size_t, N> sizes{};
  std::array<std::size_t, N> remainders{};
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < N; ++i) {
    // Exact integer arithmetic: n * w fits easily in 64 bits here.
    sizes[i] = n * weights[i] / total;
    remainders[i] = n * weights[i] % total;
    assigned += sizes[i];
  }
  std::array<std::size_t, N> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) {
    ++sizes[order[k % N]];
  }
  return sizes;
}

constexpr std::size_t kTrainWeight = 3030;
constexpr std::size_t kValWeight = 750;
constexpr std::size_t kTestWeight = 955;

std::vector<std::string> SortedIds(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

SplitSizes ProportionalSplitSizes(std::size_t n) {
  auto s = LargestRemainder<3>(n, {kTrainWeight, kValWeight, kTestWeight});
  if (n >= 3) {
    for (std::size_t i = 0; i < 3; ++i) {
      if (s[i] == 0) {
        ++s[i];
        --*std::max_element(s.begin(), s.end());
      }
    }
  }
  return {s[0], s[1], s[2]};
}

DatasetSplit Split(const DatasetIndex& index, std::uint64_t seed) {
  std::vector<std::string> from_train, from_test, unspecified;
  for (const auto& img : index.images()) {
    if (img.relationships.empty()) continue;
    switch (img.origin) {
      case SourceSplit::kTrain: from_train.push_back(img.image_id); break;
      case SourceSplit::kTest: from_test.push_back(img.image_id); break;
      case SourceSplit::kUnspecified: unspecified.push_back(img.image_id); break;
    }
  }
  const std::size_t usable =
      from_train.size() + from_test.size() + unspecified.size();
  if (usable < 3) {
    throw InvalidArgument(
        "cannot split: need at least 3 images with relationships, have " +
        std::to_string(usable));
  }

  Rng rng(seed);
  std::vector<std::string> train, val, test;
  if (!from_train.empty() && !from_test.empty() && unspecified.empty()) {
    if (from_train.size() < 2) {
      throw InvalidArgument("cannot split: need at least 2 training images");
    }
    rng.Shuffle(from_train);
    auto s = LargestRemainder<2>(from_train.size(), {kTrainWeight, kValWeight});
    if (s[1] == 0) {
      s[1] = 1;
      --s[0];
    }
    train.assign(from_train.begin(), from_train.begin() + s[0]);
    val.assign(from_train.begin() + s[0], from_train.end());
    test = std::move(from_test);
  } else {
    std::vector<std::string> pool;
    pool.insert(pool.end(), from_train.begin(), from_train.end());
    pool.insert(pool.end(), from_test.begin(), from_test.end());
    pool.insert(pool.end(), unspecified.begin(), unspecified.end());
    std::sort(pool.begin(), pool.end());
    rng.Shuffle(pool);
    const SplitSizes s = ProportionalSplitSizes(pool.size());
    train.assign(pool.begin(), pool.begin() + s.train);
    val.assign(pool.begin() + s.train, pool.begin() + s.train + s.val);
    test.assign(pool.begin() + s.train + s.val, pool.end());
  }
  return {index.Subset(SortedIds(std::move(train))),
          index.Subset(SortedIds(std::move(val))),
          index.Subset(SortedIds(std::move(test)))};
}

// ---------------------------------------------------------------------------
// Pairs and statistics

std::vector<std::pair<std::size_t, std::size_t>> EnumeratePairs(
    std::size_t n, PairMode mode) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (n < 2) return pairs;
  pairs.reserve(mode == PairMode::kOrdered ? n * (n - 1) : n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = mode == PairMode::kOrdered ? 0 : i + 1; j < n; ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

namespace {

CountSummary Summarize(const std::vector<ImageStatsRow>& rows,
                       std::size_t ImageStatsRow::*field) {
  CountSummary s;
  if (rows.empty()) return s;
  s.min = rows.front().*field;
  std::size_t total = 0;
  bool first = true;
  for (const auto& row : rows) {
    const std::size_t v = row.*field;
    total += v;
    s.min = std::min(s.min, v);
    if (first || v > s.max) {
      s.max = v;
      s.argmax_image = row.image_id;
      first = false;
    }
    ++s.histogram[v];
  }
  s.mean = static_cast<double>(total) / static_cast<double>(rows.size());
  return s;
}

}  // namespace

DatasetStats ComputeImageStats(const DatasetIndex& index) {
  DatasetStats stats;
  for (const auto& img : index.images()) {
    stats.rows.push_back(
        {img.image_id, img.objects.size(), img.relationships.size()});
  }
  stats.objects = Summarize(stats.rows, &ImageStatsRow::objects);
  stats.relationships = Summarize(stats.rows, &ImageStatsRow::relationships);
  return stats;
}

std::string StatsToCsv(const DatasetStats& stats) {
  std::ostringstream out;
  out << "image_id,objects,relationships\n";
  for (const auto& row : stats.rows) {
    out << row.image_id << ',' << row.objects << ',' << row.relationships
        << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Detections

DetectionLoadResult LoadDetections(std::string_view json_text,
                                   const Dictionary& objects) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("detections: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ParseError("detections: top level must be an object");
  }
  DetectionLoadResult result;
  for (const auto& [image_id, dets] : doc.items()) {
    if (!dets.is_array()) {
      throw ParseError("detections: /" + image_id + " must be an array");
    }
    auto& out = result.images[image_id];
    for (std::size_t i = 0; i < dets.size(); ++i) {
      const std::string path = "detections: /" + image_id + "/" +
                               std::to_string(i);
      const json& d = dets[i];
      if (!d.is_object() || !d.contains("category") ||
          !d["category"].is_string() || !d.contains("bbox") ||
          !d["bbox"].is_array() || d["bbox"].size() != 4) {
        throw ParseError(path + ": expected {category, bbox[4], score}");
      }
      const std::string name = d["category"].get<std::string>();
      auto category = objects.Find(name);
      if (!category) {
        result.warnings.push_back("image '" + image_id +
                                  "': unmapped category '" + name + "'");
        continue;
      }
      std::array<double, 4> v{};
      for (std::size_t k = 0; k < 4; ++k) {
        if (!d["bbox"][k].is_number()) {
          throw ParseError(path + "/bbox/" + std::to_string(k) +
                           ": not a number");
        }
        v[k] = d["bbox"][k].get<double>();
      }
      double score = 1.0;
      if (d.contains("score")) {
        if (!d["score"].is_number()) {
          throw ParseError(path + "/score: not a number");
        }
        score = d["score"].get<double>();
      }
      try {
        out.push_back({static_cast<int>(i), *category,
                       BoundingBox(v[0], v[1], v[2], v[3]), score});
      } catch (const InvalidArgument& e) {
        throw ParseError(path + "/bbox: " + e.what());
      }
    }
  }
  return result;
}

}  // namespace relgraph
