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

#ifndef RELGRAPH_DATASET_H_
#define RELGRAPH_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relgraph/geometry.h"

namespace relgraph {

// Dense index <-> name mapping for object categories or predicates.
class Dictionary {
 public:
  Dictionary() = default;
  // Throws InvalidArgument on duplicate names.
  explicit Dictionary(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }

  // Throws BoundsError for an index outside [0, size()).
  const std::string& Name(int index) const;
  bool Contains(int index) const {
    return index >= 0 && static_cast<std::size_t>(index) < names_.size();
  }

  // Exact match first, then a case-insensitive match.
  std::optional<int> Find(std::string_view name) const;
  // Like Find but throws LookupError.
  int Index(std::string_view name) const;

  friend bool operator==(const Dictionary& a, const Dictionary& b) {
    return a.names_ == b.names_;
  }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
  std::unordered_map<std::string, int> folded_index_;
};

struct ObjectInstance {
  int instance_id = 0;
  int category_id = 0;
  BoundingBox bbox;
  double score = 1.0;

  friend bool operator==(const ObjectInstance&,
                         const ObjectInstance&) = default;
};

struct RelationshipAnnotation {
  ObjectInstance subject;
  int predicate_id = 0;
  ObjectInstance object;

  friend bool operator==(const RelationshipAnnotation&,
                         const RelationshipAnnotation&) = default;
};

// Which published partition an image came from. VRD ships separate train and
// test annotation files; splitting honors that boundary when it is known.
enum class SourceSplit { kUnspecified, kTrain, kTest };

struct ImageAnnotations {
  std::string image_id;
  SourceSplit origin = SourceSplit::kUnspecified;
  std::vector<ObjectInstance> objects;
  std::vector<RelationshipAnnotation> relationships;

  friend bool operator==(const ImageAnnotations&,
                         const ImageAnnotations&) = default;
};

// Annotated images plus the object and predicate dictionaries they index.
// Images are kept sorted by image id.
class DatasetIndex {
 public:
  DatasetIndex() = default;
  DatasetIndex(Dictionary objects, Dictionary predicates);

  const Dictionary& objects() const { return objects_; }
  const Dictionary& predicates() const { return predicates_; }
  const std::vector<ImageAnnotations>& images() const { return images_; }
  std::size_t size() const { return images_.size(); }
  bool empty() const { return images_.empty(); }

  const ImageAnnotations* Find(std::string_view image_id) const;
  std::size_t RelationshipCount() const;

  // Validates ids against the dictionaries and inserts in sorted position.
  // Throws InvalidArgument for a duplicate image id.
  void AddImage(ImageAnnotations image);

  // Copy holding only the named images (unknown names are ignored).
  DatasetIndex Subset(const std::vector<std::string>& image_ids) const;

  friend bool operator==(const DatasetIndex&, const DatasetIndex&) = default;

 private:
  Dictionary objects_;
  Dictionary predicates_;
  std::vector<ImageAnnotations> images_;
};

// Parses a VRD-style annotation document:
//   {"img.jpg": [{"predicate": p,
//                 "subject": {"category": c, "bbox": [ymin, ymax, xmin, xmax]},
//                 "object":  {...}}, ...], ...}
// Boxes are converted to (x_min, y_min, x_max, y_max). Object mentions that
// repeat the same (category, box) inside one image become a single instance;
// instance ids follow first appearance, subject before object.
DatasetIndex LoadAnnotations(std::string_view json_text, Dictionary objects,
                             Dictionary predicates,
                             SourceSplit origin = SourceSplit::kUnspecified);
DatasetIndex LoadAnnotationsFile(const std::filesystem::path& path,
                                 Dictionary objects, Dictionary predicates,
                                 SourceSplit origin = SourceSplit::kUnspecified);

// Inverse of LoadAnnotations (boxes written back in VRD order).
std::string ExportAnnotations(const DatasetIndex& index);

// Union of two indexes over the same dictionaries with disjoint image ids.
DatasetIndex Merge(const DatasetIndex& a, const DatasetIndex& b);

std::string DictionaryToJson(const Dictionary& dict);
// Accepts {"names": [...]} or a bare JSON array of names.
Dictionary DictionaryFromJson(std::string_view json_text);
void ExportDictionary(const Dictionary& dict, const std::filesystem::path& path);
Dictionary ImportDictionary(const std::filesystem::path& path);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;
  friend bool operator==(const SplitSizes&, const SplitSizes&) = default;
};

// Splits n images in the ratio 3030:750:955 by largest-remainder rounding.
// Ties in the remainder go to train, then val, then test. When n >= 3 every
// part receives at least one image.
SplitSizes ProportionalSplitSizes(std::size_t n);

struct DatasetSplit {
  DatasetIndex train;
  DatasetIndex val;
  DatasetIndex test;
};

// Partitions the images that carry at least one relationship.
//
// If the index holds both kTrain- and kTest-origin images, test is every
// kTest image and the kTrain images are shuffled and divided 3030:750 into
// train and val. With VRD this yields 3030/750/955. Otherwise all images are
// shuffled and divided by ProportionalSplitSizes. Throws InvalidArgument when
// fewer than 3 usable images are present.
DatasetSplit Split(const DatasetIndex& index, std::uint64_t seed);

enum class PairMode { kOrdered, kUnordered };

// Ordered: every (i, j) with i != j, lexicographic. Unordered: i < j.
std::vector<std::pair<std::size_t, std::size_t>> EnumeratePairs(
    std::size_t n, PairMode mode = PairMode::kOrdered);

struct ImageStatsRow {
  std::string image_id;
  std::size_t objects = 0;
  std::size_t relationships = 0;
};

struct CountSummary {
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
  std::string argmax_image;  // first image attaining max
  std::map<std::size_t, std::size_t> histogram;  // count -> number of images
};

struct DatasetStats {
  std::vector<ImageStatsRow> rows;
  CountSummary objects;
  CountSummary relationships;
};

DatasetStats ComputeImageStats(const DatasetIndex& index);
// CSV with header image_id,objects,relationships.
std::string StatsToCsv(const DatasetStats& stats);

struct DetectionLoadResult {
  std::map<std::string, std::vector<ObjectInstance>> images;
  std::vector<std::string> warnings;
};

// Parses a detector output document:
//   {"img.jpg": [{"category": "person", "bbox": [x_min, y_min, x_max, y_max],
//                 "score": 0.9}, ...]}
// Category names are resolved through `objects`; unknown names are dropped
// and reported in `warnings`. Instance ids are list positions.
DetectionLoadResult LoadDetections(std::string_view json_text,
                                   const Dictionary& objects);

}  // namespace relgraph

#endif  // RELGRAPH_DATASET_H_
