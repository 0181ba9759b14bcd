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

#include "relgraph/visfeat.h"

#include <charconv>
#include <cmath>
#include <fstream>

#include "relgraph/binary_io.h"
#include "relgraph/errors.h"
#include "relgraph/file_util.h"
#include "relgraph/rng.h"

namespace relgraph {

void RelationshipKey::Validate() const {
  if (subject_instance_id == object_instance_id) {
    throw InvalidArgument("relationship key '" + ToString() +
                          "' has subject == object");
  }
}

std::string RelationshipKey::ToString() const {
  return image_id + "|" + std::to_string(subject_instance_id) + "|" +
         std::to_string(object_instance_id);
}

RelationshipKey RelationshipKey::Parse(std::string_view text) {
  const auto last = text.rfind('|');
  const auto mid = last == std::string_view::npos || last == 0
                       ? std::string_view::npos
                       : text.rfind('|', last - 1);
  if (mid == std::string_view::npos) {
    throw ParseError("relationship key '" + std::string(text) +
                     "' is not image|subject|object");
  }
  auto to_int = [&](std::string_view s) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError("relationship key '" + std::string(text) +
                       "' has a non-integer instance id");
    }
    return v;
  };
  RelationshipKey key;
  key.image_id = std::string(text.substr(0, mid));
  key.subject_instance_id = to_int(text.substr(mid + 1, last - mid - 1));
  key.object_instance_id = to_int(text.substr(last + 1));
  return key;
}

FeatureStore::FeatureStore(std::uint32_t dimension) : dimension_(dimension) {
  if (dimension == 0) throw InvalidArgument("feature dimension must be >= 1");
}

void FeatureStore::Add(const RelationshipKey& key, std::vector<float> values) {
  key.Validate();
  if (values.size() != dimension_) {
    throw DimensionError("feature for '" + key.ToString() + "' has length " +
                         std::to_string(values.size()) + ", expected " +
                         std::to_string(dimension_));
  }
  for (float v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("feature for '" + key.ToString() +
                            "' is not finite");
    }
  }
  if (!entries_.emplace(key.ToString(), std::move(values)).second) {
    throw InvalidArgument("duplicate feature key '" + key.ToString() + "'");
  }
}

bool FeatureStore::Contains(const RelationshipKey& key) const {
  return entries_.contains(key.ToString());
}

std::vector<double> FeatureStore::Get(const RelationshipKey& key) const {
  auto it = entries_.find(key.ToString());
  if (it == entries_.end()) {
    throw LookupError("no visual feature for key '" + key.ToString() + "'");
  }
  return std::vector<double>(it->second.begin(), it->second.end());
}

FeatureStore ReadFeatureStore(std::istream& in) {
  binio::Reader reader(in, "RFV1");
  reader.ExpectMagic("RFV1");
  const std::uint32_t dimension = reader.ReadU32("dimension");
  if (dimension == 0) reader.Fail("dimension must be >= 1");
  const std::uint32_t count = reader.ReadU32("entry count");
  FeatureStore store(dimension);
  std::vector<float> values(dimension);
  for (std::uint32_t e = 0; e < count; ++e) {
    const std::uint64_t entry_offset = reader.offset();
    const std::uint16_t key_len = reader.ReadU16("key length");
    const std::string key_text = reader.ReadBytes(key_len, "key");
    for (float& v : values) v = reader.ReadF32("feature values");
    RelationshipKey key;
    try {
      key = RelationshipKey::Parse(key_text);
      store.Add(key, values);
    } catch (const Error& err) {
      throw ParseError("RFV1: entry " + std::to_string(e) + ": " + err.what() +
                       " at byte offset " + std::to_string(entry_offset));
    }
  }
  return store;
}

void WriteFeatureStore(const FeatureStore& store, std::ostream& out) {
  binio::WriteMagic(out, "RFV1");
  binio::WriteU32(out, store.dimension());
  binio::WriteU32(out, static_cast<std::uint32_t>(store.size()));
  for (const auto& [key, values] : store.entries()) {
    if (key.size() > 0xffff) {
      throw InvalidArgument("feature key longer than 65535 bytes");
    }
    binio::WriteU16(out, static_cast<std::uint16_t>(key.size()));
    out.write(key.data(), static_cast<std::streamsize>(key.size()));
    for (float v : values) binio::WriteF32(out, v);
  }
}

FeatureStore LoadFeatures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return ReadFeatureStore(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void SaveFeatures(const FeatureStore& store,
                  const std::filesystem::path& path) {
  WriteFileAtomically(
      path, [&](std::ostream& out) { WriteFeatureStore(store, out); }, true);
}

std::vector<double> StubVisual(const RelationshipKey& key,
                               std::uint32_t dimension, std::uint64_t seed) {
  if (dimension == 0) throw InvalidArgument("stub dimension must be >= 1");
  const std::uint64_t h = HashCombine(Fnv1a64(key.ToString()), seed);
  std::vector<double> v(dimension);
  for (std::uint32_t i = 0; i < dimension; ++i) {
    const std::uint64_t bits = Mix64(h + i * 0x9e3779b97f4a7c15ULL);
    v[i] = 2.0 * (static_cast<double>(bits >> 11) * 0x1.0p-53) - 1.0;
  }
  return v;
}

VisualProvider::VisualProvider(std::uint32_t dimension, std::uint64_t seed)
    : policy_(MissingFeaturePolicy::kStub), dimension_(dimension), seed_(seed) {
  if (dimension == 0) throw InvalidArgument("stub dimension must be >= 1");
}

VisualProvider::VisualProvider(FeatureStore store, MissingFeaturePolicy policy,
                               std::uint64_t stub_seed)
    : store_(std::move(store)),
      policy_(policy),
      dimension_(store_->dimension()),
      seed_(stub_seed) {}

std::optional<std::vector<double>> VisualProvider::Get(
    const RelationshipKey& key) const {
  if (store_ && store_->Contains(key)) return store_->Get(key);
  switch (policy_) {
    case MissingFeaturePolicy::kStub:
      return StubVisual(key, dimension_, seed_);
    case MissingFeaturePolicy::kSkip:
      return std::nullopt;
    case MissingFeaturePolicy::kError:
      break;
  }
  return store_->Get(key);  // throws LookupError
}

}  // namespace relgraph
