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

#ifndef RELGRAPH_WORDVEC_H_
#define RELGRAPH_WORDVEC_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace relgraph {

// Word -> fixed-width vector map parsed from a word2vec file. Values are held
// in double precision; parsing widens the file's values without rounding.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  // Throws InvalidArgument on a duplicate word, DimensionError on a wrong
  // length and InvalidArgument on a non-finite component.
  void Add(std::string word, std::span<const double> vector);

  // Exact lookup; no case folding.
  std::optional<std::span<const double>> Find(std::string_view word) const;
  // First word (in insertion order) equal to `word` ignoring ASCII case.
  std::optional<std::span<const double>> FindFolded(
      std::string_view word) const;

  friend bool operator==(const EmbeddingTable& a, const EmbeddingTable& b) {
    return a.dimension_ == b.dimension_ && a.words_ == b.words_ &&
           a.values_ == b.values_;
  }

 private:
  std::size_t dimension_ = 0;
  std::vector<std::string> words_;
  std::vector<double> values_;  // row-major, size() x dimension()
  std::unordered_map<std::string, std::size_t> index_;
  std::unordered_map<std::string, std::size_t> folded_index_;
};

struct EmbeddingParseOptions {
  // When set, only words whose lower-cased form is in this set are stored.
  // Lets a multi-gigabyte vector file be reduced to a dictionary's vocabulary.
  std::optional<std::unordered_set<std::string>> keep_lowercase;
};

// word2vec text format: "count dim" header, then "word v1 ... vd" per line.
// Errors carry the 1-based line number.
EmbeddingTable ParseWord2VecText(std::istream& in,
                                 const EmbeddingParseOptions& options = {});

// word2vec binary format: ASCII "count dim\n" header, then per record the
// word bytes terminated by 0x20 followed by d little-endian float32 values and
// an optional 0x0A. Errors carry the byte offset.
EmbeddingTable ParseWord2VecBinary(std::istream& in,
                                   const EmbeddingParseOptions& options = {});

// Picks the format by sniffing the first record after the header.
EmbeddingTable LoadWord2Vec(const std::filesystem::path& path,
                            const EmbeddingParseOptions& options = {});

// Text serialization with round-trip (17 significant digit) precision.
void SerializeWord2VecText(const EmbeddingTable& table, std::ostream& out);

enum class OovPolicy {
  kError,       // throw OutOfVocabularyError
  kZeroVector,  // return zeros and log the word to stderr
};

// Resolves a category or predicate name. Multi-token names ("traffic light")
// average the vectors of the tokens that are found. Each token is tried
// exactly first, then case-insensitively.
std::vector<double> LookupName(const EmbeddingTable& table,
                               std::string_view name,
                               OovPolicy policy = OovPolicy::kError);

// Subject components first, then object components.
std::vector<double> ConcatPair(std::span<const double> subject,
                               std::span<const double> object);

// {"name": [values...], ...}
std::string EmbeddingCacheToJson(
    const std::map<std::string, std::vector<double>>& cache);
std::map<std::string, std::vector<double>> EmbeddingCacheFromJson(
    std::string_view json_text);

}  // namespace relgraph

#endif  // RELGRAPH_WORDVEC_H_
