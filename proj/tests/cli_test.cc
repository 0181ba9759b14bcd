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

#include "cli.h"

#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "relgraph/dataset.h"
#include "relgraph/file_util.h"
#include "relgraph/scene_graph.h"
#include "relgraph/wordvec.h"
#include "synthetic_world.h"
#include "test_util.h"

namespace relgraph {
namespace {

using testing::DataPath;
using testing::TempDir;

bool Contains(const std::string& text, const std::string& part) {
  return text.find(part) != std::string::npos;
}

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult RunCli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::Run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> Fig5Flags() {
  return {"--annotations", DataPath("fig5/annotations.json").string(),
          "--objects",     DataPath("fig5/objects.json").string(),
          "--predicates",  DataPath("fig5/predicates.json").string()};
}

std::vector<std::string> Concat(std::vector<std::string> a,
                                const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<std::string> Lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return lines;
}

// Synthetic world written to disk in the VRD layout.
class SyntheticFiles {
 public:
  explicit SyntheticFiles(int images = 60) {
    const auto world = testing::MakeSyntheticWorld(images, 3);
    ExportDictionary(world.objects, dir_ / "objects.json");
    ExportDictionary(world.predicates, dir_ / "predicates.json");
    WriteTextAtomically(dir_ / "annotations.json", world.annotations_json);
    std::ostringstream vec;
    SerializeWord2VecText(world.vectors, vec);
    WriteTextAtomically(dir_ / "vectors.txt", vec.str());
    index_ = LoadAnnotations(world.annotations_json, world.objects,
                             world.predicates);
  }

  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  std::vector<std::string> DataFlags() const {
    return {"--annotations", Path("annotations.json"), "--objects",
            Path("objects.json"), "--predicates", Path("predicates.json")};
  }
  const DatasetIndex& index() const { return index_; }

  // Trains both models with small settings; returns the flags that select
  // them for predict/graph.
  std::vector<std::string> TrainModels(const std::string& visual_flag) {
    EXPECT_EQ(RunCli({"embed-cache", "--vectors", Path("vectors.txt"),
                      "--objects", Path("objects.json"), "--out",
                      Path("cache.json")})
                  .code,
              0);
    const std::vector<std::string> emb = {"--embedding-cache",
                                          Path("cache.json")};
    auto sem = RunCli(Concat(Concat({"train-semantic"}, DataFlags()),
                             Concat(emb, {"--hidden", "16", "--epochs", "40",
                                          "--lr", "0.2", "--batch", "8",
                                          "--quiet", "--out",
                                          Path("sem.spj")})));
    EXPECT_EQ(sem.code, 0) << sem.err;
    auto svm = RunCli(Concat(
        Concat({"train-svm"}, DataFlags()),
        Concat(emb, {"--semantic-model", Path("sem.spj"), visual_flag,
                     "--epochs", "20", "--out", Path("pred.svm")})));
    EXPECT_EQ(svm.code, 0) << svm.err;
    return Concat(emb, {"--semantic-model", Path("sem.spj"), visual_flag,
                        "--svm-model", Path("pred.svm")});
  }

 private:
  TempDir dir_;
  DatasetIndex index_;
};

TEST(CliTest, HelpGoesToStdoutAndSucceeds) {
  auto r = RunCli({"--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_PRED2(Contains, r.out, "train-semantic");
  r = RunCli({"predict", "--help"});
  EXPECT_EQ(r.code, cli::kExitOk);
  EXPECT_PRED2(Contains, r.out, "--svm-model");
}

TEST(CliTest, UsageErrorsExitTwo) {
  EXPECT_EQ(RunCli({}).code, cli::kExitUsage);
  EXPECT_EQ(RunCli({"frobnicate"}).code, cli::kExitUsage);
  auto r = RunCli(Concat({"stats", "--bogus"}, Fig5Flags()));
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_PRED2(Contains, r.err, "--bogus");
  EXPECT_TRUE(r.out.empty());
  // Missing file is caught by the option validator.
  r = RunCli({"stats", "--annotations", "/nonexistent.json", "--objects",
              DataPath("fig5/objects.json").string(), "--predicates",
              DataPath("fig5/predicates.json").string()});
  EXPECT_EQ(r.code, cli::kExitUsage);
  // Mutually exclusive feature sources.
  r = RunCli({"train-svm", "--stub-visual", "--semantic-only"});
  EXPECT_EQ(r.code, cli::kExitUsage);
}

TEST(CliTest, RuntimeErrorsExitOne) {
  TempDir dir;
  WriteTextAtomically(dir / "bad.json", "{\"a.jpg\": [");
  auto r = RunCli({"stats", "--annotations", (dir / "bad.json").string(),
                   "--objects", DataPath("fig5/objects.json").string(),
                   "--predicates", DataPath("fig5/predicates.json").string()});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_PRED2(Contains, r.err, "error: ");

  r = RunCli({"query", "--pattern", "person,on,*", "--corpus",
              dir.path().string()});
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_PRED2(Contains, r.err, "--objects");
}

TEST(CliTest, StatsOnFig5) {
  auto r = RunCli(Concat({"stats"}, Fig5Flags()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "image_id,objects,relationships\nfig5.jpg,8,7\n");

  TempDir dir;
  const std::string csv = (dir / "stats.csv").string();
  r = RunCli(Concat({"stats", "--out", csv}, Fig5Flags()));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ReadTextFile(csv), "image_id,objects,relationships\nfig5.jpg,8,7\n");
  EXPECT_PRED2(Contains, r.out, "relationships 7");
  EXPECT_PRED2(Contains, r.out, "max 7 at 'fig5.jpg'");
}

TEST(CliTest, GoldGraphOnFig5) {
  auto r = RunCli(Concat({"graph", "--gold-predicates"}, Fig5Flags()));
  ASSERT_EQ(r.code, 0) << r.err;
  const std::regex edge(R"(n\d+ -> n\d+ \[label=")");
  const auto edges = std::distance(
      std::sregex_iterator(r.out.begin(), r.out.end(), edge),
      std::sregex_iterator());
  EXPECT_EQ(edges, 7);
  EXPECT_PRED2(Contains, r.out, "label=\"person#6\"");

  r = RunCli(Concat({"graph", "--gold-predicates", "--format", "json"},
                    Fig5Flags()));
  ASSERT_EQ(r.code, 0) << r.err;
  const SceneGraph g = FromJson(r.out);
  EXPECT_EQ(g.image_id, "fig5.jpg");
  EXPECT_EQ(g.nodes.size(), 8u);
  EXPECT_EQ(g.edges.size(), 7u);

  r = RunCli(Concat({"graph", "--gold-predicates", "--image-id", "nope.jpg"},
                    Fig5Flags()));
  EXPECT_EQ(r.code, cli::kExitFailure);
}

TEST(CliTest, QueryOverGraphDirectory) {
  TempDir dir;
  auto r = RunCli(Concat({"graph", "--gold-predicates", "--format", "json",
                          "--out-dir", dir.path().string()},
                         Fig5Flags()));
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(std::filesystem::exists(dir / "fig5.jpg.json"));

  r = RunCli({"query", "--pattern", "person,on,*", "--corpus",
              dir.path().string(), "--objects",
              DataPath("fig5/objects.json").string(), "--predicates",
              DataPath("fig5/predicates.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "image_id,score\nfig5.jpg,1\n");
  r = RunCli({"query", "--pattern", "wheel,under,*", "--corpus",
              dir.path().string(), "--objects",
              DataPath("fig5/objects.json").string(), "--predicates",
              DataPath("fig5/predicates.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "image_id,score\nfig5.jpg,2\n");

  // A graph queried against itself scores 1 under both methods.
  for (const std::string method : {"jaccard", "walk"}) {
    r = RunCli({"query", "--graph", (dir / "fig5.jpg.json").string(),
                "--corpus", dir.path().string(), "--method", method});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "image_id,score\nfig5.jpg,1\n") << method;
  }
  r = RunCli({"query", "--graph", (dir / "fig5.jpg.json").string(),
              "--corpus", dir.path().string(), "--method", "cosine"});
  EXPECT_EQ(r.code, cli::kExitFailure);
}

TEST(CliTest, SplitWritesLoadableDeterministicManifests) {
  SyntheticFiles files(100);
  TempDir a, b, c;
  for (const auto* d : {&a, &b}) {
    auto r = RunCli(Concat({"split", "--seed", "7", "--out", d->path().string()},
                           files.DataFlags()));
    ASSERT_EQ(r.code, 0) << r.err;
  }
  ASSERT_EQ(RunCli(Concat({"split", "--seed", "8", "--out", c.path().string()},
                          files.DataFlags()))
                .code,
            0);
  std::size_t total = 0;
  const Dictionary objects = ImportDictionary(a / "objects.json");
  const Dictionary predicates = ImportDictionary(a / "predicates.json");
  EXPECT_EQ(objects, files.index().objects());
  for (const std::string part : {"train", "val", "test"}) {
    const auto file = part + ".json";
    EXPECT_EQ(ReadTextFile(a / file), ReadTextFile(b / file)) << part;
    total += LoadAnnotationsFile(a / file, objects, predicates).size();
  }
  EXPECT_EQ(total, files.index().size());
  EXPECT_EQ(LoadAnnotationsFile(a / "train.json", objects, predicates).size(),
            64u);
  EXPECT_NE(ReadTextFile(a / "train.json"), ReadTextFile(c / "train.json"));
}

TEST(CliTest, EndToEndPredictAndEvaluate) {
  SyntheticFiles files;
  const auto models = files.TrainModels("--semantic-only");
  EXPECT_TRUE(std::filesystem::exists(files.Path("sem.spj.loss.csv")));

  auto r = RunCli(Concat(Concat({"predict"}, files.DataFlags()), models));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = Lines(r.out);
  ASSERT_FALSE(lines.empty());
  EXPECT_EQ(lines[0],
            "image_id,subject_id,object_id,rank,predicate_id,predicate,"
            "probability");
  std::size_t expected_rows = 0;
  for (const auto& img : files.index().images()) {
    const std::size_t n = img.objects.size();
    expected_rows += 3 * n * (n - 1);
  }
  EXPECT_EQ(lines.size() - 1, expected_rows);
  // Ranks cycle 1,2,3 with non-increasing probability inside each pair.
  for (std::size_t i = 1; i + 2 < lines.size(); i += 3) {
    double last = 2.0;
    for (int k = 0; k < 3; ++k) {
      const std::string& line = lines[i + k];
      const auto comma = line.rfind(',');
      const double p = std::stod(line.substr(comma + 1));
      EXPECT_LE(p, last);
      last = p;
      EXPECT_PRED2(Contains, line, "," + std::to_string(k + 1) + ",");
    }
  }

  // Deterministic output.
  const auto again = RunCli(Concat(Concat({"predict"}, files.DataFlags()), models));
  EXPECT_EQ(again.out, r.out);

  WriteTextAtomically(files.Path("pred.csv"), r.out);
  const std::vector<std::string> gold = {
      "--gold", files.Path("annotations.json"), "--objects",
      files.Path("objects.json"), "--predicates", files.Path("predicates.json"),
      "--pred", files.Path("pred.csv")};
  auto acc = RunCli(Concat(Concat({"eval", "--metric", "accuracy", "--report",
                                   files.Path("acc.json")},
                                  gold),
                           {}));
  ASSERT_EQ(acc.code, 0) << acc.err;
  const auto report = nlohmann::json::parse(ReadTextFile(files.Path("acc.json")));
  const double accuracy = report["value"];
  EXPECT_GE(accuracy, 0.8);
  EXPECT_EQ(report["missing_pairs"], 0);

  auto rec = RunCli(Concat({"eval", "--metric", "recall@3", "--report",
                            files.Path("rec.json")},
                           gold));
  ASSERT_EQ(rec.code, 0) << rec.err;
  const double recall =
      nlohmann::json::parse(ReadTextFile(files.Path("rec.json")))["value"];
  EXPECT_GE(recall, accuracy);
  EXPECT_LE(recall, 1.0);

  // Lists of length 3 cannot answer recall@4.
  EXPECT_EQ(RunCli(Concat({"eval", "--metric", "recall@4"}, gold)).code,
            cli::kExitFailure);
  EXPECT_EQ(RunCli(Concat({"eval", "--metric", "recall@0"}, gold)).code,
            cli::kExitFailure);

  // Model-driven graphs carry at most k edges per ordered pair.
  r = RunCli(Concat(Concat({"graph", "--format", "json", "--image-id",
                            "syn0000.jpg", "--k", "1"},
                           files.DataFlags()),
                    models));
  ASSERT_EQ(r.code, 0) << r.err;
  const SceneGraph g = FromJson(r.out);
  const std::size_t n = g.nodes.size();
  EXPECT_EQ(g.edges.size(), n * (n - 1));
}

TEST(CliTest, StubVisualAndFeatureFilePolicies) {
  SyntheticFiles files(20);
  const auto models = files.TrainModels("--stub-visual");
  auto r = RunCli(Concat(Concat({"predict", "--k", "2"}, files.DataFlags()),
                         models));
  ASSERT_EQ(r.code, 0) << r.err;

  // An empty RFV1 file: the default policy refuses missing pairs.
  WriteTextAtomically(files.Path("empty.rfv"), std::string());
  {
    std::ofstream out(files.Path("empty.rfv"), std::ios::binary);
    const char header[] = {'R', 'F', 'V', '1', 0, 16, 0, 0, 0, 0, 0, 0};
    out.write(header, sizeof(header));
  }
  const std::vector<std::string> emb = {"--embedding-cache",
                                        files.Path("cache.json")};
  r = RunCli(Concat(Concat({"train-svm"}, files.DataFlags()),
                    Concat(emb, {"--semantic-model", files.Path("sem.spj"),
                                 "--features", files.Path("empty.rfv"),
                                 "--out", files.Path("x.svm")})));
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_FALSE(std::filesystem::exists(files.Path("x.svm")));
  r = RunCli(Concat(Concat({"train-svm"}, files.DataFlags()),
                    Concat(emb, {"--semantic-model", files.Path("sem.spj"),
                                 "--features", files.Path("empty.rfv"),
                                 "--missing", "stub", "--stub-dim", "16",
                                 "--epochs", "2", "--out",
                                 files.Path("x.svm")})));
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(files.Path("x.svm")));
}

TEST(CliTest, MapFromDetections) {
  SyntheticFiles files(10);
  // Detections equal to the gold boxes give a perfect score.
  nlohmann::json dets = nlohmann::json::object();
  const auto& objects = files.index().objects();
  for (const auto& img : files.index().images()) {
    auto& list = dets[img.image_id] = nlohmann::json::array();
    for (const auto& o : img.objects) {
      list.push_back(nlohmann::json{
          {"category", objects.Name(o.category_id)},
                      {"bbox",
                       {o.bbox.x_min(), o.bbox.y_min(), o.bbox.x_max(), o.bbox.y_max()}},
                      {"score", 0.9}});
    }
  }
  dets["syn0000.jpg"].push_back(nlohmann::json{
      {"category", "unicorn"}, {"bbox", {0, 0, 1, 1}}, {"score", 0.5}});
  WriteTextAtomically(files.Path("dets.json"), dets.dump());
  auto r = RunCli({"eval", "--metric", "map", "--gold",
                   files.Path("annotations.json"), "--objects",
                   files.Path("objects.json"), "--predicates",
                   files.Path("predicates.json"), "--pred",
                   files.Path("dets.json"), "--report", files.Path("map.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_PRED2(Contains, r.err, "unicorn");
  const auto report = nlohmann::json::parse(ReadTextFile(files.Path("map.json")));
  EXPECT_DOUBLE_EQ(report["value"].get<double>(), 1.0);
  EXPECT_DOUBLE_EQ(report["iou_threshold"].get<double>(), 0.5);
}

TEST(CliTest, EmbedCacheMatchesDirectLookup) {
  SyntheticFiles files(5);
  auto r = RunCli({"embed-cache", "--vectors", files.Path("vectors.txt"),
                   "--objects", files.Path("objects.json"), "--out",
                   files.Path("cache.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cache =
      EmbeddingCacheFromJson(ReadTextFile(files.Path("cache.json")));
  const auto table = LoadWord2Vec(files.Path("vectors.txt"));
  ASSERT_EQ(cache.size(), files.index().objects().size());
  for (const auto& [name, vec] : cache) {
    EXPECT_EQ(vec, LookupName(table, name, OovPolicy::kError)) << name;
  }
}

TEST(CliTest, FailedWriteLeavesNoFile) {
  TempDir dir;
  const auto target = dir / "missing_dir" / "stats.csv";
  auto r = RunCli(Concat({"stats", "--out", target.string()}, Fig5Flags()));
  EXPECT_EQ(r.code, cli::kExitFailure);
  EXPECT_FALSE(std::filesystem::exists(target));
}

}  // namespace
}  // namespace relgraph
