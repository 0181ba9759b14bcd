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

#ifndef RELGRAPH_VISFEAT_H_
#define RELGRAPH_VISFEAT_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relgraph {

// Identifies one directed subject -> object pair inside an image.
struct RelationshipKey {
  std::string image_id;
  int subject_instance_id = 0;
  int object_instance_id = 0;

  // Throws InvalidArgument when subject == object.
  void Validate() const;

  // "image_id|subject_id|object_id"
  std::string ToString() const;
  // Splits on the last two '|' so image ids may themselves contain '|'.
  static RelationshipKey Parse(std::string_view text);

  friend auto operator<=>(const RelationshipKey&,
                          const RelationshipKey&) = default;
};

// Precomputed visual relationship features, usually produced by the feature
// extraction adapter. Vectors are stored at file precision (float32).
class FeatureStore {
 public:
  static constexpr std::uint32_t kDefaultDimension = 4096;

  explicit FeatureStore(std::uint32_t dimension = kDefaultDimension);

  std::uint32_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<float>>& entries() const {
    return entries_;
  }

  // Throws InvalidArgument on duplicates or non-finite values and
  // DimensionError on a wrong length.
  void Add(const RelationshipKey& key, std::vector<float> values);
  bool Contains(const RelationshipKey& key) const;

  // Throws LookupError carrying the key when it is absent.
  std::vector<double> Get(const RelationshipKey& key) const;

  friend bool operator==(const FeatureStore&, const FeatureStore&) = default;

 private:
  std::uint32_t dimension_;
  std::map<std::string, std::vector<float>> entries_;
};

// RFV1 layout, all integers little-endian:
//   "RFV1" | u32 dimension | u32 count |
//   count x (u16 key length | key bytes | dimension x float32)
FeatureStore ReadFeatureStore(std::istream& in);
void WriteFeatureStore(const FeatureStore& store, std::ostream& out);
FeatureStore LoadFeatures(const std::filesystem::path& path);
void SaveFeatures(const FeatureStore& store, const std::filesystem::path& path);

// Deterministic stand-in for CNN features. Components lie in [-1, 1] and are
// a pure function of (key string, dimension, seed):
//   h     = HashCombine(FNV-1a-64(key.ToString()), seed)
//   v[i]  = 2 * (Mix64(h + i * 0x9e3779b97f4a7c15) >> 11) * 2^-53 - 1
std::vector<double> StubVisual(const RelationshipKey& key,
                               std::uint32_t dimension, std::uint64_t seed);

enum class MissingFeaturePolicy {
  kError,  // throw LookupError
  kStub,   // substitute StubVisual
  kSkip,   // report absence to the caller
};

// Visual feature source used by the pipeline: a loaded store, the stub
// generator, or both with a policy for gaps.
class VisualProvider {
 public:
  // Stub-only provider.
  VisualProvider(std::uint32_t dimension, std::uint64_t seed);
  VisualProvider(FeatureStore store, MissingFeaturePolicy policy,
                 std::uint64_t stub_seed = 0);

  std::uint32_t dimension() const { return dimension_; }

  // nullopt only under kSkip for a missing key.
  std::optional<std::vector<double>> Get(const RelationshipKey& key) const;

 private:
  std::optional<FeatureStore> store_;
  MissingFeaturePolicy policy_;
  std::uint32_t dimension_;
  std::uint64_t seed_;
};

}  // namespace relgraph

#endif  // RELGRAPH_VISFEAT_H_
