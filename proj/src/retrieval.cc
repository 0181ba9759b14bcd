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

#include "relgraph/retrieval.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "relgraph/errors.h"
#include "relgraph/text_util.h"

namespace relgraph {

void TriplePattern::Validate() const {
  if (!subject_category && !predicate && !object_category) {
    throw InvalidArgument("triple pattern needs at least one non-wildcard");
  }
}

bool TriplePattern::Matches(int subject, int pred, int object) const {
  return (!subject_category || *subject_category == subject) &&
         (!predicate || *predicate == pred) &&
         (!object_category || *object_category == object);
}

TriplePattern ParseTriplePattern(std::string_view text,
                                 const Dictionary& objects,
                                 const Dictionary& predicates) {
  const auto parts = Split(text, ',');
  if (parts.size() != 3) {
    throw ParseError("pattern '" + std::string(text) +
                     "' must have the form subject,predicate,object");
  }
  auto resolve = [&](const std::string& raw, const Dictionary& dict,
                     const char* role) -> std::optional<int> {
    const std::string_view name = Trim(raw);
    if (name == "*") return std::nullopt;
    if (name.empty()) {
      throw ParseError(std::string("pattern ") + role + " is empty");
    }
    if (auto id = dict.Find(name)) return id;
    throw LookupError(std::string("pattern ") + role + " '" +
                      std::string(name) + "' is not in the dictionary");
  };
  TriplePattern p{resolve(parts[0], objects, "subject"),
                  resolve(parts[1], predicates, "predicate"),
                  resolve(parts[2], objects, "object")};
  p.Validate();
  return p;
}

namespace {

using CategoricalTriple = std::tuple<int, int, int>;

int CategoryOf(const SceneGraph& g, int instance_id) {
  const ObjectInstance* n = g.FindNode(instance_id);
  if (!n) throw InvalidArgument("edge references an unknown node");
  return n->category_id;
}

std::set<CategoricalTriple> TripleSet(const SceneGraph& g) {
  std::set<CategoricalTriple> out;
  for (const SceneEdge& e : g.edges) {
    out.emplace(CategoryOf(g, e.subject), e.predicate_id,
                CategoryOf(g, e.object));
  }
  return out;
}

using WalkLabel = std::vector<int>;

// Walk label -> number of walks carrying it, over lengths 1..max_length.
std::map<WalkLabel, std::uint64_t> WalkLabelCounts(const SceneGraph& g,
                                                   int max_length) {
  std::map<int, std::vector<const SceneEdge*>> out_edges;
  for (const SceneEdge& e : g.edges) out_edges[e.subject].push_back(&e);

  std::map<WalkLabel, std::uint64_t> counts;
  // (label, end node) -> walks of the current length
  std::map<std::pair<WalkLabel, int>, std::uint64_t> frontier;
  for (const SceneEdge& e : g.edges) {
    ++frontier[{{CategoryOf(g, e.subject), e.predicate_id,
                 CategoryOf(g, e.object)},
                e.object}];
  }
  for (int length = 1; length <= max_length; ++length) {
    for (const auto& [state, n] : frontier) counts[state.first] += n;
    if (length == max_length) break;
    std::map<std::pair<WalkLabel, int>, std::uint64_t> next;
    for (const auto& [state, n] : frontier) {
      auto it = out_edges.find(state.second);
      if (it == out_edges.end()) continue;
      for (const SceneEdge* e : it->second) {
        WalkLabel label = state.first;
        label.push_back(e->predicate_id);
        label.push_back(CategoryOf(g, e->object));
        next[{std::move(label), e->object}] += n;
      }
    }
    frontier = std::move(next);
  }
  return counts;
}

}  // namespace

std::size_t CountMatches(const TriplePattern& pattern,
                         const SceneGraph& graph) {
  std::size_t n = 0;
  for (const SceneEdge& e : graph.edges) {
    if (pattern.Matches(CategoryOf(graph, e.subject), e.predicate_id,
                        CategoryOf(graph, e.object))) {
      ++n;
    }
  }
  return n;
}

double TripleSetSimilarity(const SceneGraph& a, const SceneGraph& b) {
  const auto sa = TripleSet(a);
  const auto sb = TripleSet(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t shared = 0;
  for (const auto& t : sa) shared += sb.count(t);
  const std::size_t uni = sa.size() + sb.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(uni);
}

double WalkSimilarity(const SceneGraph& a, const SceneGraph& b,
                      int max_length) {
  if (max_length < 1 || max_length > 3) {
    throw InvalidArgument("walk length must be 1, 2 or 3");
  }
  const auto ca = WalkLabelCounts(a, max_length);
  const auto cb = WalkLabelCounts(b, max_length);
  std::uint64_t own_a = 0, own_b = 0, shared = 0;
  for (const auto& [label, n] : ca) own_a += n;
  for (const auto& [label, n] : cb) own_b += n;
  if (own_a == 0 && own_b == 0) return 1.0;
  if (own_a == 0 || own_b == 0) return 0.0;
  for (const auto& [label, n] : ca) {
    if (auto it = cb.find(label); it != cb.end()) {
      shared += std::min(n, it->second);
    }
  }
  if (shared == own_a && own_a == own_b) return 1.0;
  const double score = static_cast<double>(shared) /
                       std::sqrt(static_cast<double>(own_a) *
                                 static_cast<double>(own_b));
  return std::min(score, 1.0);
}

SimilarityMethod ParseSimilarityMethod(std::string_view tag) {
  if (tag == "jaccard") return SimilarityMethod::kJaccard;
  if (tag == "walk") return SimilarityMethod::kWalk;
  throw InvalidArgument("unknown similarity method '" + std::string(tag) +
                        "' (expected jaccard or walk)");
}

std::vector<RankedImage> RankByContext(const ContextQuery& query,
                                       const std::vector<SceneGraph>& corpus,
                                       const RankOptions& options) {
  if (corpus.empty()) throw InvalidArgument("corpus is empty");
  std::vector<RankedImage> ranking;
  ranking.reserve(corpus.size());
  for (const SceneGraph& g : corpus) {
    double score = 0.0;
    if (const auto* pattern = std::get_if<TriplePattern>(&query)) {
      score = static_cast<double>(CountMatches(*pattern, g));
    } else {
      const auto& graph = std::get<SceneGraph>(query);
      score = options.method == SimilarityMethod::kJaccard
                  ? TripleSetSimilarity(graph, g)
                  : WalkSimilarity(graph, g, options.walk_length);
    }
    ranking.push_back({g.image_id, score});
  }
  std::sort(ranking.begin(), ranking.end(),
            [](const RankedImage& x, const RankedImage& y) {
              if (x.score != y.score) return x.score > y.score;
              return x.image_id < y.image_id;
            });
  if (options.limit > 0 && ranking.size() > options.limit) {
    ranking.resize(options.limit);
  }
  return ranking;
}

std::string RankingToCsv(const std::vector<RankedImage>& ranking) {
  std::ostringstream out;
  out.precision(17);
  out << "image_id,score\n";
  for (const auto& r : ranking) out << r.image_id << ',' << r.score << '\n';
  return out.str();
}

}  // namespace relgraph
