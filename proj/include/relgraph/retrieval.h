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

#ifndef RELGRAPH_RETRIEVAL_H_
#define RELGRAPH_RETRIEVAL_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relgraph/dataset.h"
#include "relgraph/scene_graph.h"

namespace relgraph {

// (subject category, predicate, object category) with optional wildcards.
struct TriplePattern {
  std::optional<int> subject_category;
  std::optional<int> predicate;
  std::optional<int> object_category;

  // Throws InvalidArgument when every field is a wildcard.
  void Validate() const;
  bool Matches(int subject, int pred, int object) const;
};

// Parses "subject,predicate,object" with "*" as a wildcard. Names resolve
// through the dictionaries (exact, then case-insensitive).
TriplePattern ParseTriplePattern(std::string_view text,
                                 const Dictionary& objects,
                                 const Dictionary& predicates);

// Number of edges of `graph` matching the pattern.
std::size_t CountMatches(const TriplePattern& pattern, const SceneGraph& graph);

// Jaccard index of the two sets of categorical triples. Two graphs without
// edges score 1, one empty and one non-empty score 0.
double TripleSetSimilarity(const SceneGraph& a, const SceneGraph& b);

// Walk-kernel similarity. A walk of length l is a directed path of l edges;
// its label is the sequence (category, predicate, category, ..., category).
// Shared walks are counted as the multiset intersection of the two graphs'
// walk labels over lengths 1..max_length, then divided by the geometric mean
// of the two graphs' own walk counts. Two graphs without walks score 1; one
// without walks scores 0. max_length must be 1, 2 or 3.
double WalkSimilarity(const SceneGraph& a, const SceneGraph& b,
                      int max_length);

enum class SimilarityMethod { kJaccard, kWalk };

// "jaccard" or "walk"; anything else throws InvalidArgument.
SimilarityMethod ParseSimilarityMethod(std::string_view tag);

struct RankOptions {
  SimilarityMethod method = SimilarityMethod::kJaccard;
  int walk_length = 2;
  std::size_t limit = 0;  // 0 keeps every corpus member
};

struct RankedImage {
  std::string image_id;
  double score = 0.0;
  friend bool operator==(const RankedImage&, const RankedImage&) = default;
};

using ContextQuery = std::variant<SceneGraph, TriplePattern>;

// Scores every corpus graph against the query and sorts by descending score,
// then ascending image id. Pattern queries score by CountMatches and ignore
// the method. Throws InvalidArgument for an empty corpus.
std::vector<RankedImage> RankByContext(const ContextQuery& query,
                                       const std::vector<SceneGraph>& corpus,
                                       const RankOptions& options = {});

// CSV with header image_id,score.
std::string RankingToCsv(const std::vector<RankedImage>& ranking);

}  // namespace relgraph

#endif  // RELGRAPH_RETRIEVAL_H_
