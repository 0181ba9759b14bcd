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

#include "relgraph/scene_graph.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "relgraph/errors.h"

namespace relgraph {

using nlohmann::json;

const ObjectInstance* SceneGraph::FindNode(int instance_id) const {
  auto it = std::lower_bound(
      nodes.begin(), nodes.end(), instance_id,
      [](const ObjectInstance& n, int id) { return n.instance_id < id; });
  if (it == nodes.end() || it->instance_id != instance_id) return nullptr;
  return &*it;
}

void SceneGraph::Validate() const {
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i - 1].instance_id >= nodes[i].instance_id) {
      throw InvalidArgument("/nodes/" + std::to_string(i) +
                            ": instance ids must be unique and ascending");
    }
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const SceneEdge& e = edges[i];
    const std::string where = "/edges/" + std::to_string(i) + ":";
    if (!FindNode(e.subject) || !FindNode(e.object)) {
      throw InvalidArgument(where + " references an unknown node");
    }
    if (e.subject == e.object) throw InvalidArgument(where + " is a self loop");
    if (!std::isfinite(e.probability) || e.probability < 0.0 ||
        e.probability > 1.0) {
      throw InvalidArgument(where + " probability outside [0, 1]");
    }
    const bool same_pair = i > 0 && edges[i - 1].subject == e.subject &&
                           edges[i - 1].object == e.object;
    if (i > 0 && std::tie(edges[i - 1].subject, edges[i - 1].object) >
                     std::tie(e.subject, e.object)) {
      throw InvalidArgument(where + " is out of (subject, object) order");
    }
    const int expected_rank = same_pair ? edges[i - 1].rank + 1 : 1;
    if (e.rank != expected_rank) {
      throw InvalidArgument(where + " has rank " + std::to_string(e.rank) +
                            ", expected " + std::to_string(expected_rank));
    }
    if (same_pair && e.probability > edges[i - 1].probability) {
      throw InvalidArgument(where + " probability increases with rank");
    }
  }
}

SceneGraph AssembleSceneGraph(std::string image_id,
                              std::vector<ObjectInstance> instances,
                              std::vector<PairPrediction> predictions, int k,
                              double min_prob) {
  if (k < 1) throw InvalidArgument("k must be at least 1");
  if (!(min_prob >= 0.0 && min_prob <= 1.0)) {
    throw InvalidArgument("min_prob must lie in [0, 1]");
  }
  SceneGraph g;
  g.image_id = std::move(image_id);
  g.nodes = std::move(instances);
  std::sort(g.nodes.begin(), g.nodes.end(),
            [](const ObjectInstance& a, const ObjectInstance& b) {
              return a.instance_id < b.instance_id;
            });
  for (std::size_t i = 1; i < g.nodes.size(); ++i) {
    if (g.nodes[i - 1].instance_id == g.nodes[i].instance_id) {
      throw InvalidArgument("duplicate instance id " +
                            std::to_string(g.nodes[i].instance_id));
    }
  }

  std::sort(predictions.begin(), predictions.end(),
            [](const PairPrediction& a, const PairPrediction& b) {
              return std::tie(a.subject, a.object) <
                     std::tie(b.subject, b.object);
            });
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    PairPrediction& p = predictions[i];
    if (!g.FindNode(p.subject) || !g.FindNode(p.object)) {
      throw LookupError("prediction for pair (" + std::to_string(p.subject) +
                        ", " + std::to_string(p.object) +
                        ") references an unknown instance");
    }
    if (p.subject == p.object) {
      throw InvalidArgument("prediction pairs instance " +
                            std::to_string(p.subject) + " with itself");
    }
    if (i > 0 && predictions[i - 1].subject == p.subject &&
        predictions[i - 1].object == p.object) {
      throw InvalidArgument("pair (" + std::to_string(p.subject) + ", " +
                            std::to_string(p.object) + ") predicted twice");
    }
    std::sort(p.ranked.begin(), p.ranked.end(),
              [](const RankedPredicate& a, const RankedPredicate& b) {
                if (a.probability != b.probability) {
                  return a.probability > b.probability;
                }
                return a.predicate_id < b.predicate_id;
              });
    std::set<int> seen;
    int rank = 0;
    for (const RankedPredicate& rp : p.ranked) {
      if (rank == k) break;
      if (!seen.insert(rp.predicate_id).second) continue;
      if (rp.probability < min_prob) break;
      g.edges.push_back(
          {p.subject, p.object, rp.predicate_id, rp.probability, ++rank});
    }
  }
  return g;
}

std::vector<PairPrediction> GoldPairPredictions(const ImageAnnotations& image) {
  std::map<std::pair<int, int>, std::set<int>> grouped;
  for (const auto& r : image.relationships) {
    if (r.subject.instance_id == r.object.instance_id) continue;
    grouped[{r.subject.instance_id, r.object.instance_id}].insert(
        r.predicate_id);
  }
  std::vector<PairPrediction> out;
  for (const auto& [pair, preds] : grouped) {
    PairPrediction p{pair.first, pair.second, {}};
    for (int id : preds) p.ranked.push_back({id, 1.0});
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Triple> ExtractTriples(const SceneGraph& graph,
                                   const Dictionary& objects,
                                   const Dictionary& predicates) {
  std::vector<Triple> out;
  for (const SceneEdge& e : graph.edges) {
    const ObjectInstance* s = graph.FindNode(e.subject);
    const ObjectInstance* o = graph.FindNode(e.object);
    if (!s || !o) throw BoundsError("edge references an unknown node");
    out.push_back({objects.Name(s->category_id),
                   predicates.Name(e.predicate_id),
                   objects.Name(o->category_id), e.probability});
  }
  return out;
}

namespace {

std::string DotQuote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

std::string ToDot(const SceneGraph& graph, const Dictionary* objects,
                  const Dictionary* predicates) {
  std::ostringstream out;
  out << "digraph " << DotQuote(graph.image_id) << " {\n";
  for (const ObjectInstance& n : graph.nodes) {
    const std::string category = objects ? objects->Name(n.category_id)
                                          : std::to_string(n.category_id);
    out << "  n" << n.instance_id << " [label="
        << DotQuote(category + "#" + std::to_string(n.instance_id)) << "];\n";
  }
  char prob[32];
  for (const SceneEdge& e : graph.edges) {
    const std::string predicate = predicates
                                      ? predicates->Name(e.predicate_id)
                                      : std::to_string(e.predicate_id);
    std::snprintf(prob, sizeof(prob), "%.3f", e.probability);
    out << "  n" << e.subject << " -> n" << e.object
        << " [label=" << DotQuote(predicate + " (" + prob + ")") << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string ToJson(const SceneGraph& graph) {
  json nodes = json::array();
  for (const ObjectInstance& n : graph.nodes) {
    nodes.push_back({{"id", n.instance_id},
                     {"category", n.category_id},
                     {"bbox", {n.bbox.x_min(), n.bbox.y_min(), n.bbox.x_max(),
                               n.bbox.y_max()}},
                     {"score", n.score}});
  }
  json edges = json::array();
  for (const SceneEdge& e : graph.edges) {
    edges.push_back({{"subject", e.subject},
                     {"object", e.object},
                     {"predicate", e.predicate_id},
                     {"probability", e.probability},
                     {"rank", e.rank}});
  }
  json doc = {{"version", 1},
              {"image", graph.image_id},
              {"nodes", std::move(nodes)},
              {"edges", std::move(edges)}};
  return doc.dump(2);
}

namespace {

const json& Field(const json& obj, const char* name, const std::string& path) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw ParseError(path + "/" + name + ": missing");
  }
  return *it;
}

int IntField(const json& obj, const char* name, const std::string& path) {
  const json& v = Field(obj, name, path);
  if (!v.is_number_integer()) {
    throw ParseError(path + "/" + name + ": expected an integer");
  }
  return v.get<int>();
}

double NumberField(const json& obj, const char* name, const std::string& path) {
  const json& v = Field(obj, name, path);
  if (!v.is_number()) {
    throw ParseError(path + "/" + name + ": expected a number");
  }
  return v.get<double>();
}

const json& ArrayField(const json& obj, const char* name,
                       const std::string& path) {
  const json& v = Field(obj, name, path);
  if (!v.is_array()) {
    throw ParseError(path + "/" + name + ": expected an array");
  }
  return v;
}

}  // namespace

SceneGraph FromJson(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scene graph: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("/: expected an object");
  if (IntField(doc, "version", "") != 1) {
    throw ParseError("/version: unsupported version");
  }
  SceneGraph g;
  const json& image = Field(doc, "image", "");
  if (!image.is_string()) throw ParseError("/image: expected a string");
  g.image_id = image.get<std::string>();

  const json& nodes = ArrayField(doc, "nodes", "");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string path = "/nodes/" + std::to_string(i);
    if (!nodes[i].is_object()) throw ParseError(path + ": expected an object");
    const json& bbox = ArrayField(nodes[i], "bbox", path);
    if (bbox.size() != 4) {
      throw ParseError(path + "/bbox: expected 4 numbers");
    }
    double c[4];
    for (std::size_t k = 0; k < 4; ++k) {
      if (!bbox[k].is_number()) {
        throw ParseError(path + "/bbox/" + std::to_string(k) +
                         ": expected a number");
      }
      c[k] = bbox[k].get<double>();
    }
    ObjectInstance n;
    n.instance_id = IntField(nodes[i], "id", path);
    n.category_id = IntField(nodes[i], "category", path);
    n.score = NumberField(nodes[i], "score", path);
    try {
      n.bbox = BoundingBox(c[0], c[1], c[2], c[3]);
    } catch (const InvalidArgument& e) {
      throw ParseError(path + "/bbox: " + e.what());
    }
    g.nodes.push_back(n);
  }

  const json& edges = ArrayField(doc, "edges", "");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = "/edges/" + std::to_string(i);
    if (!edges[i].is_object()) throw ParseError(path + ": expected an object");
    SceneEdge e;
    e.subject = IntField(edges[i], "subject", path);
    e.object = IntField(edges[i], "object", path);
    e.predicate_id = IntField(edges[i], "predicate", path);
    e.probability = NumberField(edges[i], "probability", path);
    e.rank = IntField(edges[i], "rank", path);
    g.edges.push_back(e);
  }
  try {
    g.Validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("scene graph: ") + e.what());
  }
  return g;
}

}  // namespace relgraph
