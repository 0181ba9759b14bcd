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

#ifndef RELGRAPH_SCENE_GRAPH_H_
#define RELGRAPH_SCENE_GRAPH_H_

#include <string>
#include <string_view>
#include <vector>

#include "relgraph/dataset.h"
#include "relgraph/predsvm.h"

namespace relgraph {

struct SceneEdge {
  int subject = 0;  // instance id
  int object = 0;   // instance id
  int predicate_id = 0;
  double probability = 0.0;
  int rank = 1;  // 1-based position among the pair's retained predicates

  friend bool operator==(const SceneEdge&, const SceneEdge&) = default;
};

// Directed labeled multigraph over the object instances of one image. Nodes
// are sorted by instance id; edges by (subject, object, rank). A pair may
// carry several parallel edges, one per retained predicate.
struct SceneGraph {
  std::string image_id;
  std::vector<ObjectInstance> nodes;
  std::vector<SceneEdge> edges;

  const ObjectInstance* FindNode(int instance_id) const;

  // Throws InvalidArgument when an invariant is broken: unknown or duplicate
  // node ids, self loops, ranks not 1..m per pair, probabilities increasing
  // with rank, or out-of-order nodes/edges.
  void Validate() const;

  friend bool operator==(const SceneGraph&, const SceneGraph&) = default;
};

struct PairPrediction {
  int subject = 0;  // instance id
  int object = 0;   // instance id
  std::vector<RankedPredicate> ranked;
};

// Keeps the top-k predicates of every pair whose probability is at least
// min_prob. The input order of `predictions` (and of each ranked list) does
// not matter. Throws LookupError for an unknown instance and InvalidArgument
// for self pairs, repeated pairs, k < 1 or min_prob outside [0, 1].
SceneGraph AssembleSceneGraph(std::string image_id,
                              std::vector<ObjectInstance> instances,
                              std::vector<PairPrediction> predictions, int k,
                              double min_prob = 0.0);

// Gold annotations as predictions with probability 1. Pairs annotated with
// several predicates get one ranked entry per distinct predicate.
std::vector<PairPrediction> GoldPairPredictions(const ImageAnnotations& image);

struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;
  double probability = 0.0;

  friend bool operator==(const Triple&, const Triple&) = default;
};

// One row per edge in edge order. Throws BoundsError for an id missing from
// the dictionaries.
std::vector<Triple> ExtractTriples(const SceneGraph& graph,
                                   const Dictionary& objects,
                                   const Dictionary& predicates);

// Graphviz digraph. Node labels are "category#instance", edge labels
// "predicate (probability)". Without dictionaries ids are printed instead of
// names.
std::string ToDot(const SceneGraph& graph, const Dictionary* objects = nullptr,
                  const Dictionary* predicates = nullptr);

// Versioned JSON document:
//   {"version": 1, "image": "...",
//    "nodes": [{"id", "category", "bbox": [x_min, y_min, x_max, y_max],
//               "score"}],
//    "edges": [{"subject", "object", "predicate", "probability", "rank"}]}
// Doubles are written with round-trip precision.
std::string ToJson(const SceneGraph& graph);
// Schema errors are ParseErrors prefixed with a JSON pointer ("/edges/2/rank").
SceneGraph FromJson(std::string_view text);

}  // namespace relgraph

#endif  // RELGRAPH_SCENE_GRAPH_H_
