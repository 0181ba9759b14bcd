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
#include <regex>

#include <gtest/gtest.h>

#include "relgraph/errors.h"
#include "relgraph/rng.h"
#include "relgraph/text_util.h"
#include "test_util.h"

namespace relgraph {
namespace {

using testing::DataPath;

ObjectInstance Inst(int id, int category) {
  return {id, category, BoundingBox(id, id, id + 10.0, id + 5.0), 1.0};
}

PairPrediction Pred(int s, int o, std::vector<RankedPredicate> ranked) {
  return {s, o, std::move(ranked)};
}

DatasetIndex Fig5() {
  return LoadAnnotationsFile(DataPath("fig5/annotations.json"),
                             ImportDictionary(DataPath("fig5/objects.json")),
                             ImportDictionary(DataPath("fig5/predicates.json")));
}

SceneGraph RandomGraph(Rng& rng) {
  const int n = static_cast<int>(rng.Below(6));
  std::vector<ObjectInstance> inst;
  for (int i = 0; i < n; ++i) {
    inst.push_back({i * 3 + 1, static_cast<int>(rng.Below(5)),
                    BoundingBox(rng.Uniform(0, 10), rng.Uniform(0, 10),
                                rng.Uniform(10, 20), rng.Uniform(10, 20)),
                    rng.Uniform()});
  }
  std::vector<PairPrediction> preds;
  for (const auto& [i, j] : EnumeratePairs(inst.size())) {
    if (rng.Below(2) == 0) continue;
    std::vector<RankedPredicate> ranked;
    for (int p = 0; p < 4; ++p) ranked.push_back({p, rng.Uniform() / 4});
    preds.push_back(Pred(inst[i].instance_id, inst[j].instance_id, ranked));
  }
  return AssembleSceneGraph("img" + std::to_string(rng.Below(100)), inst,
                            preds, 1 + static_cast<int>(rng.Below(3)));
}

TEST(AssembleTest, Fig5GoldGraphReproducesGoldTriples) {
  const DatasetIndex index = Fig5();
  const ImageAnnotations& img = index.images()[0];
  const SceneGraph g = AssembleSceneGraph(img.image_id, img.objects,
                                          GoldPairPredictions(img), 1);
  const auto triples = ExtractTriples(g, index.objects(), index.predicates());
  std::vector<std::string> got;
  for (const auto& t : triples) {
    EXPECT_EQ(t.probability, 1.0);
    got.push_back(ToLowerAscii("(" + t.subject + ", " + t.predicate + ", " +
                               t.object + ")"));
  }
  // Table rows as printed; the table capitalizes the subject.
  std::vector<std::string> expected = {
      "(Wheel, under, cart)",  "(Basket, on top, cart)", "(Plant, in, basket)",
      "(Wheel, under, bike)",  "(Pants, on, person)",    "(Person, on, bike)",
      "(Person, has, shirt)"};
  for (auto& e : expected) e = ToLowerAscii(e);
  std::sort(got.begin(), got.end());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(got, expected);
  EXPECT_EQ(g.nodes.size(), 8u);
  EXPECT_EQ(g.edges.size(), 7u);
}

TEST(AssembleTest, EmptyInstances) {
  const SceneGraph g = AssembleSceneGraph("x", {}, {}, 3);
  EXPECT_TRUE(g.nodes.empty());
  EXPECT_TRUE(g.edges.empty());
  EXPECT_TRUE(ExtractTriples(g, Dictionary(), Dictionary()).empty());
}

TEST(AssembleTest, TopKBothDirections) {
  const std::vector<RankedPredicate> ranked = {
      {0, 0.1}, {1, 0.4}, {2, 0.3}, {3, 0.2}};
  const SceneGraph g = AssembleSceneGraph(
      "x", {Inst(1, 0), Inst(0, 1)},
      {Pred(0, 1, ranked), Pred(1, 0, ranked)}, 3);
  ASSERT_EQ(g.edges.size(), 6u);
  EXPECT_EQ(g.nodes[0].instance_id, 0);
  EXPECT_EQ(g.edges[0], (SceneEdge{0, 1, 1, 0.4, 1}));
  EXPECT_EQ(g.edges[1], (SceneEdge{0, 1, 2, 0.3, 2}));
  EXPECT_EQ(g.edges[2], (SceneEdge{0, 1, 3, 0.2, 3}));
  EXPECT_EQ(g.edges[3].subject, 1);
  EXPECT_NO_THROW(g.Validate());
}

TEST(AssembleTest, MinProbFilters) {
  const SceneGraph g = AssembleSceneGraph(
      "x", {Inst(0, 0), Inst(1, 1)},
      {Pred(0, 1, {{0, 0.6}, {1, 0.3}, {2, 0.1}})}, 3, 0.25);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_THROW(AssembleSceneGraph("x", {}, {}, 3, 1.5), InvalidArgument);
  EXPECT_THROW(AssembleSceneGraph("x", {}, {}, 0), InvalidArgument);
}

TEST(AssembleTest, Errors) {
  const std::vector<ObjectInstance> inst = {Inst(0, 0), Inst(1, 1)};
  EXPECT_THROW(AssembleSceneGraph("x", inst, {Pred(0, 7, {{0, 1.0}})}, 1),
               LookupError);
  EXPECT_THROW(AssembleSceneGraph("x", inst, {Pred(0, 0, {{0, 1.0}})}, 1),
               InvalidArgument);
  EXPECT_THROW(AssembleSceneGraph(
                   "x", inst, {Pred(0, 1, {{0, 1.0}}), Pred(0, 1, {{1, 1.0}})},
                   1),
               InvalidArgument);
}

TEST(AssembleTest, PermutationInvariantAndBounded) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.Below(6));
    const int k = 1 + static_cast<int>(rng.Below(3));
    std::vector<ObjectInstance> inst;
    for (int i = 0; i < n; ++i) inst.push_back(Inst(i * 2, i % 3));
    std::vector<PairPrediction> preds;
    for (const auto& [i, j] : EnumeratePairs(inst.size())) {
      std::vector<RankedPredicate> ranked;
      for (int p = 0; p < 5; ++p) ranked.push_back({p, rng.Uniform()});
      preds.push_back(Pred(inst[i].instance_id, inst[j].instance_id, ranked));
    }
    const SceneGraph a = AssembleSceneGraph("x", inst, preds, k);
    rng.Shuffle(inst);
    rng.Shuffle(preds);
    for (auto& p : preds) rng.Shuffle(p.ranked);
    const SceneGraph b = AssembleSceneGraph("x", inst, preds, k);
    EXPECT_EQ(a, b);
    EXPECT_LE(a.edges.size(), static_cast<std::size_t>(n * (n - 1) * k));
    EXPECT_NO_THROW(a.Validate());
  }
}

TEST(TriplesTest, DirectednessMatters) {
  const Dictionary objects({"Person", "Food"});
  const Dictionary predicates({"eating"});
  const auto forward = ExtractTriples(
      AssembleSceneGraph("x", {Inst(0, 0), Inst(1, 1)},
                         {Pred(0, 1, {{0, 0.9}})}, 1),
      objects, predicates);
  const auto backward = ExtractTriples(
      AssembleSceneGraph("x", {Inst(0, 0), Inst(1, 1)},
                         {Pred(1, 0, {{0, 0.9}})}, 1),
      objects, predicates);
  EXPECT_EQ(forward[0], (Triple{"Person", "eating", "Food", 0.9}));
  EXPECT_EQ(backward[0], (Triple{"Food", "eating", "Person", 0.9}));
  EXPECT_NE(forward, backward);
  EXPECT_THROW(ExtractTriples(AssembleSceneGraph("x", {Inst(0, 5), Inst(1, 1)},
                                                 {Pred(0, 1, {{0, 0.9}})}, 1),
                              objects, predicates),
               BoundsError);
}

TEST(ValidateTest, DetectsBrokenInvariants) {
  SceneGraph g = AssembleSceneGraph("x", {Inst(0, 0), Inst(1, 1)},
                                    {Pred(0, 1, {{0, 0.6}, {1, 0.4}})}, 2);
  SceneGraph bad = g;
  bad.edges[1].probability = 0.9;
  EXPECT_THROW(bad.Validate(), InvalidArgument);
  bad = g;
  bad.edges[1].rank = 3;
  EXPECT_THROW(bad.Validate(), InvalidArgument);
  bad = g;
  bad.edges[0].object = 0;
  EXPECT_THROW(bad.Validate(), InvalidArgument);
  bad = g;
  bad.edges[0].object = 9;
  EXPECT_THROW(bad.Validate(), InvalidArgument);
  bad = g;
  std::swap(bad.nodes[0], bad.nodes[1]);
  EXPECT_THROW(bad.Validate(), InvalidArgument);
}

TEST(DotTest, SingleNode) {
  const SceneGraph g = AssembleSceneGraph("x", {Inst(4, 0)}, {}, 1);
  const std::string dot = ToDot(g, nullptr, nullptr);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  const std::regex node_stmt(R"(\n\s*n\d+ \[label=)");
  const std::regex edge_stmt("->");
  const auto count = [](const std::string& s, const std::regex& re) {
    return std::distance(std::sregex_iterator(s.begin(), s.end(), re),
                         std::sregex_iterator());
  };
  EXPECT_EQ(count(dot, node_stmt), 1);
  EXPECT_EQ(count(dot, edge_stmt), 0);
  EXPECT_NE(dot.find("\"0#4\""), std::string::npos) << dot;
}

TEST(DotTest, Fig5Counts) {
  const DatasetIndex index = Fig5();
  const ImageAnnotations& img = index.images()[0];
  const SceneGraph g = AssembleSceneGraph(img.image_id, img.objects,
                                          GoldPairPredictions(img), 1);
  const std::string dot = ToDot(g, &index.objects(), &index.predicates());
  const std::regex node_stmt(R"(\n\s*n\d+ \[label=)");
  const std::regex edge_stmt(R"(\n\s*n\d+ -> n\d+)");
  EXPECT_EQ(std::distance(std::sregex_iterator(dot.begin(), dot.end(), node_stmt),
                          std::sregex_iterator()),
            8);
  EXPECT_EQ(std::distance(std::sregex_iterator(dot.begin(), dot.end(), edge_stmt),
                          std::sregex_iterator()),
            7);
  EXPECT_NE(dot.find("\"person#6\""), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"on top (1.000)\""), std::string::npos) << dot;
}

TEST(JsonTest, RoundTripRandomGraphs) {
  Rng rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    const SceneGraph g = RandomGraph(rng);
    EXPECT_EQ(FromJson(ToJson(g)), g);
  }
}

TEST(JsonTest, SchemaErrorsCarryPointer) {
  const SceneGraph g = AssembleSceneGraph(
      "x", {Inst(0, 0), Inst(1, 1)}, {Pred(0, 1, {{0, 0.6}, {1, 0.4}})}, 2);
  std::string text = ToJson(g);
  const auto expect_error = [](const std::string& doc, const std::string& ptr) {
    try {
      FromJson(doc);
      ADD_FAILURE() << "accepted " << doc;
    } catch (const ParseError& e) {
      EXPECT_NE(std::string(e.what()).find(ptr), std::string::npos) << e.what();
    }
  };
  expect_error("[]", "/");
  expect_error(R"({"version": 2, "image": "x", "nodes": [], "edges": []})",
               "/version");
  expect_error(R"({"version": 1, "image": "x", "nodes": [], "edges": [
      {"subject": 0, "object": 1, "predicate": 0, "probability": 1,
       "rank": "one"}]})",
               "/edges/0/rank");
  expect_error(R"({"version": 1, "image": "x", "nodes": [{"id": 0,
      "category": 0, "bbox": [0, 0, 1], "score": 1}], "edges": []})",
               "/nodes/0/bbox");
  expect_error("{", "");
}

}  // namespace
}  // namespace relgraph
