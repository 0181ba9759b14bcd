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

#include <cmath>
#include <functional>
#include <map>

#include <gtest/gtest.h>

#include "relgraph/errors.h"
#include "relgraph/rng.h"
#include "random_graphs.h"
#include "test_util.h"

namespace relgraph {
namespace {

using testing::DataPath;
using testing::RandomGraph;
using testing::Renumber;

SceneGraph Build(const std::string& image_id,
                 const std::vector<std::array<int, 5>>& rows) {
  return testing::BuildGraph(image_id, rows);
}

SceneGraph Fig5Graph() {
  const DatasetIndex index =
      LoadAnnotationsFile(DataPath("fig5/annotations.json"),
                          ImportDictionary(DataPath("fig5/objects.json")),
                          ImportDictionary(DataPath("fig5/predicates.json")));
  const ImageAnnotations& img = index.images()[0];
  return AssembleSceneGraph(img.image_id, img.objects, GoldPairPredictions(img),
                            1);
}

// Exhaustive enumeration of every edge sequence forming a directed walk.
std::map<std::vector<int>, int> WalkLabels(const SceneGraph& g, int max_len) {
  std::map<std::vector<int>, int> out;
  auto category = [&](int id) { return g.FindNode(id)->category_id; };
  std::function<void(const SceneEdge&, std::vector<int>, int)> extend =
      [&](const SceneEdge& last, std::vector<int> label, int len) {
        ++out[label];
        if (len == max_len) return;
        for (const SceneEdge& e : g.edges) {
          if (e.subject != last.object) continue;
          auto next = label;
          next.push_back(e.predicate_id);
          next.push_back(category(e.object));
          extend(e, next, len + 1);
        }
      };
  for (const SceneEdge& e : g.edges) {
    extend(e, {category(e.subject), e.predicate_id, category(e.object)}, 1);
  }
  return out;
}

double WalkOracle(const SceneGraph& a, const SceneGraph& b, int max_len) {
  const auto wa = WalkLabels(a, max_len), wb = WalkLabels(b, max_len);
  double own_a = 0, own_b = 0, shared = 0;
  for (const auto& [label, n] : wa) {
    own_a += n;
    if (auto it = wb.find(label); it != wb.end()) shared += std::min(n, it->second);
  }
  for (const auto& [label, n] : wb) own_b += n;
  if (own_a == 0 && own_b == 0) return 1.0;
  if (own_a == 0 || own_b == 0) return 0.0;
  return shared / std::sqrt(own_a * own_b);
}

TEST(TriplePatternTest, ParseAndMatch) {
  const Dictionary objects({"person", "bike"}), predicates({"on", "has"});
  const TriplePattern p = ParseTriplePattern("Person, on, *", objects, predicates);
  EXPECT_EQ(p.subject_category, 0);
  EXPECT_EQ(p.predicate, 0);
  EXPECT_FALSE(p.object_category);
  EXPECT_TRUE(p.Matches(0, 0, 1));
  EXPECT_FALSE(p.Matches(1, 0, 1));
  EXPECT_THROW(ParseTriplePattern("*,*,*", objects, predicates),
               InvalidArgument);
  EXPECT_THROW(ParseTriplePattern("person,on", objects, predicates), ParseError);
  EXPECT_THROW(ParseTriplePattern("dog,on,*", objects, predicates), LookupError);
}

TEST(TripleSetSimilarityTest, Examples) {
  // Triples A, B, C vs B, C, D.
  const SceneGraph g1 = Build("g1", {{0, 0, 0, 1, 1}, {0, 0, 1, 1, 1}, {1, 1, 2, 2, 2}});
  const SceneGraph g2 = Build("g2", {{0, 0, 1, 1, 1}, {1, 1, 2, 2, 2}, {2, 2, 0, 0, 0}});
  EXPECT_DOUBLE_EQ(TripleSetSimilarity(g1, g2), 0.5);
  EXPECT_DOUBLE_EQ(TripleSetSimilarity(g1, g1), 1.0);
  const SceneGraph g3 = Build("g3", {{0, 2, 2, 1, 2}});
  EXPECT_DOUBLE_EQ(TripleSetSimilarity(g1, g3), 0.0);
  const SceneGraph empty = AssembleSceneGraph("e", {}, {}, 1);
  EXPECT_DOUBLE_EQ(TripleSetSimilarity(empty, empty), 1.0);
  EXPECT_DOUBLE_EQ(TripleSetSimilarity(empty, g1), 0.0);
}

TEST(TripleSetSimilarityTest, DuplicateTriplesCountOnce) {
  // Two person-on-bike edges between different instances form one triple.
  const SceneGraph g1 = Build("g1", {{0, 0, 0, 1, 1}, {2, 0, 0, 3, 1}});
  const SceneGraph g2 = Build("g2", {{0, 0, 0, 1, 1}});
  EXPECT_DOUBLE_EQ(TripleSetSimilarity(g1, g2), 1.0);
}

TEST(WalkSimilarityTest, ChainSharingOneStep) {
  // a -p0-> b -p1-> c versus a -p0-> b -p2-> d.
  const SceneGraph g1 = Build("g1", {{0, 0, 0, 1, 1}, {1, 1, 1, 2, 2}});
  const SceneGraph g2 = Build("g2", {{0, 0, 0, 1, 1}, {1, 1, 2, 2, 3}});
  EXPECT_DOUBLE_EQ(WalkSimilarity(g1, g2, 1), 0.5);
  // Length 2 adds one walk per graph, neither shared: 1 / sqrt(3 * 3).
  EXPECT_DOUBLE_EQ(WalkSimilarity(g1, g2, 2), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(WalkSimilarity(g1, g2, 1), WalkOracle(g1, g2, 1));
  EXPECT_THROW(WalkSimilarity(g1, g2, 0), InvalidArgument);
  EXPECT_THROW(WalkSimilarity(g1, g2, 4), InvalidArgument);
}

TEST(WalkSimilarityTest, NoCommonStep) {
  const SceneGraph g1 = Build("g1", {{0, 0, 0, 1, 1}});
  const SceneGraph g2 = Build("g2", {{0, 1, 0, 1, 0}});
  EXPECT_DOUBLE_EQ(WalkSimilarity(g1, g2, 3), 0.0);
  const SceneGraph empty = AssembleSceneGraph("e", {}, {}, 1);
  EXPECT_DOUBLE_EQ(WalkSimilarity(empty, empty, 2), 1.0);
  EXPECT_DOUBLE_EQ(WalkSimilarity(empty, g1, 2), 0.0);
}

TEST(WalkSimilarityTest, MatchesExhaustiveEnumeration) {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const SceneGraph a = RandomGraph(rng, "a"), b = RandomGraph(rng, "b");
    for (int len = 1; len <= 3; ++len) {
      const double got = WalkSimilarity(a, b, len);
      EXPECT_NEAR(got, WalkOracle(a, b, len), 1e-12) << trial << " " << len;
      EXPECT_NEAR(got, WalkSimilarity(b, a, len), 1e-12);
      EXPECT_GE(got, 0.0);
      EXPECT_LE(got, 1.0 + 1e-12);
    }
    if (!a.edges.empty()) EXPECT_NEAR(WalkSimilarity(a, a, 3), 1.0, 1e-12);
  }
}

TEST(SimilarityTest, InvariantUnderRenumbering) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const SceneGraph a = RandomGraph(rng, "a"), b = RandomGraph(rng, "b");
    const SceneGraph a2 = Renumber(a, rng), b2 = Renumber(b, rng);
    EXPECT_EQ(TripleSetSimilarity(a, b), TripleSetSimilarity(a2, b2));
    EXPECT_NEAR(WalkSimilarity(a, b, 3), WalkSimilarity(a2, b2, 3), 1e-12);
  }
}

TEST(RankByContextTest, CorpusMemberRanksFirst) {
  Rng rng(2);
  std::vector<SceneGraph> corpus;
  for (int i = 0; i < 10; ++i) {
    SceneGraph g = RandomGraph(rng, "img" + std::to_string(i));
    corpus.push_back(g);
  }
  corpus.push_back(Fig5Graph());
  const auto ranking = RankByContext(Fig5Graph(), corpus);
  ASSERT_EQ(ranking.size(), corpus.size());
  EXPECT_EQ(ranking[0], (RankedImage{"fig5.jpg", 1.0}));
  for (std::size_t i = 1; i < ranking.size(); ++i) {
    EXPECT_TRUE(ranking[i - 1].score > ranking[i].score ||
                (ranking[i - 1].score == ranking[i].score &&
                 ranking[i - 1].image_id < ranking[i].image_id));
  }
  RankOptions options;
  options.limit = 1;
  options.method = SimilarityMethod::kWalk;
  EXPECT_EQ(RankByContext(Fig5Graph(), corpus, options).size(), 1u);
  EXPECT_THROW(RankByContext(Fig5Graph(), {}), InvalidArgument);
}

TEST(RankByContextTest, PatternAgainstFig5) {
  const Dictionary objects = ImportDictionary(DataPath("fig5/objects.json"));
  const Dictionary predicates =
      ImportDictionary(DataPath("fig5/predicates.json"));
  const auto pattern = ParseTriplePattern("Person,on,*", objects, predicates);
  EXPECT_EQ(CountMatches(pattern, Fig5Graph()), 1u);
  const auto ranking = RankByContext(pattern, {Fig5Graph()});
  EXPECT_EQ(ranking[0].score, 1.0);
  EXPECT_EQ(CountMatches(ParseTriplePattern("wheel,under,*", objects, predicates),
                         Fig5Graph()),
            2u);
}

TEST(RankByContextTest, MethodTags) {
  EXPECT_EQ(ParseSimilarityMethod("jaccard"), SimilarityMethod::kJaccard);
  EXPECT_EQ(ParseSimilarityMethod("walk"), SimilarityMethod::kWalk);
  EXPECT_THROW(ParseSimilarityMethod("cosine"), InvalidArgument);
  EXPECT_EQ(RankingToCsv({{"a", 0.5}}), "image_id,score\na,0.5\n");
}

}  // namespace
}  // namespace relgraph
