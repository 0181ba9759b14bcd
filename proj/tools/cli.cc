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

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "relgraph/dataset.h"
#include "relgraph/errors.h"
#include "relgraph/file_util.h"
#include "relgraph/metrics.h"
#include "relgraph/pipeline.h"
#include "relgraph/predsvm.h"
#include "relgraph/retrieval.h"
#include "relgraph/scene_graph.h"
#include "relgraph/semproj.h"
#include "relgraph/text_util.h"
#include "relgraph/visfeat.h"
#include "relgraph/wordvec.h"

namespace relgraph::cli {
namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Flag groups shared by several subcommands.

struct DictionaryFlags {
  std::string objects;
  std::string predicates;

  void Add(CLI::App* app) {
    app->add_option("--objects", objects, "Object dictionary JSON")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--predicates", predicates, "Predicate dictionary JSON")
        ->required()
        ->check(CLI::ExistingFile);
  }
  Dictionary Objects() const { return ImportDictionary(objects); }
  Dictionary Predicates() const { return ImportDictionary(predicates); }
};

struct DatasetFlags {
  DictionaryFlags dicts;
  std::string annotations;
  std::string test_annotations;

  void Add(CLI::App* app, bool required = true) {
    auto* opt = app->add_option("--annotations", annotations,
                                "Annotation JSON (VRD layout)")
                    ->check(CLI::ExistingFile);
    if (required) opt->required();
    app->add_option("--test-annotations", test_annotations,
                    "Optional VRD test-partition file; splits keep it as test")
        ->check(CLI::ExistingFile);
    dicts.Add(app);
  }

  DatasetIndex Load() const {
    const Dictionary objects = dicts.Objects();
    const Dictionary predicates = dicts.Predicates();
    if (test_annotations.empty()) {
      return LoadAnnotationsFile(annotations, objects, predicates);
    }
    return Merge(
        LoadAnnotationsFile(annotations, objects, predicates,
                            SourceSplit::kTrain),
        LoadAnnotationsFile(test_annotations, objects, predicates,
                            SourceSplit::kTest));
  }
};

const std::map<std::string, OovPolicy> kOovPolicies = {
    {"error", OovPolicy::kError}, {"zero", OovPolicy::kZeroVector}};

struct EmbeddingFlags {
  std::string vectors;
  std::string cache;
  OovPolicy oov = OovPolicy::kZeroVector;

  void Add(CLI::App* app) {
    auto* v = app->add_option("--vectors", vectors,
                              "word2vec file (text or binary)")
                  ->check(CLI::ExistingFile);
    auto* c = app->add_option("--embedding-cache", cache,
                              "Embedding cache JSON written by embed-cache")
                  ->check(CLI::ExistingFile);
    v->excludes(c);
    app->add_option("--oov", oov, "Out-of-vocabulary names: error or zero")
        ->transform(CLI::CheckedTransformer(kOovPolicies, CLI::ignore_case));
  }

  NameEmbedder Load(const Dictionary& objects) const {
    if (!cache.empty()) {
      return NameEmbedder::FromCache(
          EmbeddingCacheFromJson(ReadTextFile(cache)), objects);
    }
    if (vectors.empty()) {
      throw InvalidArgument("one of --vectors or --embedding-cache is required");
    }
    EmbeddingParseOptions options;
    options.keep_lowercase = VocabularyOf({&objects});
    return NameEmbedder(LoadWord2Vec(vectors, options), objects, oov);
  }
};

const std::map<std::string, MissingFeaturePolicy> kMissingPolicies = {
    {"error", MissingFeaturePolicy::kError},
    {"stub", MissingFeaturePolicy::kStub},
    {"skip", MissingFeaturePolicy::kSkip}};

const std::map<std::string, EmbeddingMode> kEmbeddingModes = {
    {"logits", EmbeddingMode::kLogits}, {"hidden", EmbeddingMode::kHidden}};

// How SVM features are formed from a pair.
struct FeatureFlags {
  std::string semantic_model;
  std::string features;
  bool stub_visual = false;
  bool semantic_only = false;
  std::uint32_t stub_dim = FeatureStore::kDefaultDimension;
  std::uint64_t stub_seed = 0;
  MissingFeaturePolicy missing = MissingFeaturePolicy::kError;
  EmbeddingMode embedding = EmbeddingMode::kLogits;

  void Add(CLI::App* app) {
    app->add_option("--semantic-model", semantic_model,
                    "Semantic projection checkpoint (SPJ1)")
        ->required()
        ->check(CLI::ExistingFile);
    auto* f = app->add_option("--features", features,
                              "Visual features (RFV1)")
                  ->check(CLI::ExistingFile);
    auto* s = app->add_flag("--stub-visual", stub_visual,
                            "Use deterministic stub visual features");
    auto* o = app->add_flag("--semantic-only", semantic_only,
                            "Use the semantic embedding alone");
    f->excludes(s)->excludes(o);
    s->excludes(o);
    app->add_option("--stub-dim", stub_dim, "Stub feature width")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--stub-seed", stub_seed, "Stub feature seed")
        ->capture_default_str();
    app->add_option("--missing", missing,
                    "Pairs absent from --features: error, stub or skip")
        ->transform(CLI::CheckedTransformer(kMissingPolicies, CLI::ignore_case));
    app->add_option("--embedding", embedding,
                    "Semantic embedding layer: logits or hidden")
        ->transform(CLI::CheckedTransformer(kEmbeddingModes, CLI::ignore_case));
  }

  // Null for --semantic-only.
  std::unique_ptr<VisualProvider> Visual() const {
    if (semantic_only) return nullptr;
    if (stub_visual) return std::make_unique<VisualProvider>(stub_dim, stub_seed);
    if (features.empty()) {
      throw InvalidArgument(
          "one of --features, --stub-visual or --semantic-only is required");
    }
    return std::make_unique<VisualProvider>(LoadFeatures(features), missing,
                                            stub_seed);
  }
};

// Object instances for prediction: gold objects or detector output.
struct InstanceFlags {
  std::string detections;
  std::string image_id;

  void Add(CLI::App* app) {
    app->add_option("--detections", detections,
                    "Detections JSON; replaces annotated objects")
        ->check(CLI::ExistingFile);
    app->add_option("--image-id", image_id, "Restrict to one image");
  }

  std::map<std::string, std::vector<ObjectInstance>> Load(
      const DatasetIndex* gold, const Dictionary& objects,
      std::ostream& err) const {
    std::map<std::string, std::vector<ObjectInstance>> images;
    if (!detections.empty()) {
      auto loaded = LoadDetections(ReadTextFile(detections), objects);
      for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
      images = std::move(loaded.images);
    } else if (gold) {
      for (const auto& img : gold->images()) images[img.image_id] = img.objects;
    } else {
      throw InvalidArgument("one of --annotations or --detections is required");
    }
    if (image_id.empty()) return images;
    auto it = images.find(image_id);
    if (it == images.end()) {
      throw LookupError("image '" + image_id + "' not found");
    }
    return {{it->first, it->second}};
  }
};

// ---------------------------------------------------------------------------
// Output helpers.

std::string FormatDouble(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::vector<std::string> ParseCsvLine(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

// Writes to `path` atomically, or to `out` when the path is empty or "-".
void Emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    WriteTextAtomically(path, text);
  }
}

std::string SafeFileName(std::string name) {
  for (char& c : name) {
    if (c == '/' || c == '\\') c = '_';
  }
  return name;
}

// ---------------------------------------------------------------------------
// stats

struct StatsCommand {
  DatasetFlags data;
  std::string out_path;

  void Add(CLI::App* app) {
    data.Add(app);
    app->add_option("--out", out_path, "CSV destination (default stdout)");
  }

  int Run(std::ostream& out, std::ostream&) const {
    const DatasetIndex index = data.Load();
    const DatasetStats stats = ComputeImageStats(index);
    Emit(out_path, StatsToCsv(stats), out);
    if (!out_path.empty() && out_path != "-") {
      out << "images " << index.size() << "\n"
          << "relationships " << index.RelationshipCount() << "\n"
          << "relationships per image: min " << stats.relationships.min
          << ", max " << stats.relationships.max << " at '"
          << stats.relationships.argmax_image << "', mean "
          << stats.relationships.mean << "\n"
          << "objects per image: min " << stats.objects.min << ", max "
          << stats.objects.max << " at '" << stats.objects.argmax_image
          << "', mean " << stats.objects.mean << "\n";
    }
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// split

struct SplitCommand {
  DatasetFlags data;
  std::uint64_t seed = 0;
  std::string out_dir;

  void Add(CLI::App* app) {
    data.Add(app);
    app->add_option("--seed", seed, "Shuffle seed")->capture_default_str();
    app->add_option("--out", out_dir, "Output directory")->required();
  }

  int Run(std::ostream& out, std::ostream&) const {
    const DatasetIndex index = data.Load();
    const DatasetSplit split = Split(index, seed);
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    WriteTextAtomically(dir / "train.json", ExportAnnotations(split.train));
    WriteTextAtomically(dir / "val.json", ExportAnnotations(split.val));
    WriteTextAtomically(dir / "test.json", ExportAnnotations(split.test));
    ExportDictionary(index.objects(), dir / "objects.json");
    ExportDictionary(index.predicates(), dir / "predicates.json");
    out << "train " << split.train.size() << " images, "
        << split.train.RelationshipCount() << " relationships\n"
        << "val " << split.val.size() << " images, "
        << split.val.RelationshipCount() << " relationships\n"
        << "test " << split.test.size() << " images, "
        << split.test.RelationshipCount() << " relationships\n";
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// train-semantic

struct TrainSemanticCommand {
  DatasetFlags data;
  EmbeddingFlags embedding;
  std::string val_annotations;
  TrainConfig config;
  bool no_early_stopping = false;
  bool quiet = false;
  std::string out_path;
  std::string loss_csv;

  void Add(CLI::App* app) {
    data.Add(app);
    embedding.Add(app);
    app->add_option("--val-annotations", val_annotations,
                    "Validation annotations (default: the training set)")
        ->check(CLI::ExistingFile);
    app->add_option("--epochs", config.epochs, "Training epochs")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", config.seed, "Initialization and shuffle seed")
        ->capture_default_str();
    app->add_option("--hidden", config.hidden, "Hidden width (0 = linear)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    app->add_option("--lr", config.learning_rate, "Learning rate")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--batch", config.batch_size, "Mini-batch size")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_flag("--no-early-stopping", no_early_stopping,
                  "Keep the last epoch instead of the best validation epoch");
    app->add_flag("--quiet", quiet, "Suppress per-epoch logging");
    app->add_option("--out", out_path, "Checkpoint path (SPJ1)")->required();
    app->add_option("--loss-csv", loss_csv,
                    "Loss curve CSV (default: <out>.loss.csv)");
  }

  int Run(std::ostream& out, std::ostream& err) {
    const DatasetIndex train = data.Load();
    const NameEmbedder embedder = embedding.Load(train.objects());
    const SemanticDataset train_set = BuildSemanticDataset(train, embedder);
    SemanticDataset val_set;
    if (val_annotations.empty()) {
      err << "note: no --val-annotations; validating on the training set\n";
      val_set = train_set;
    } else {
      val_set = BuildSemanticDataset(
          LoadAnnotationsFile(val_annotations, train.objects(),
                              train.predicates()),
          embedder);
    }
    config.early_stopping = !no_early_stopping;
    config.log_progress = !quiet;
    const TrainResult result =
        TrainMlp(train_set.inputs, train_set.labels, val_set.inputs,
                 val_set.labels, static_cast<int>(train.predicates().size()),
                 config);
    SaveMlpCheckpoint(result.model, out_path);
    WriteTextAtomically(loss_csv.empty() ? out_path + ".loss.csv" : loss_csv,
                        LossCurvesToCsv(result));
    out << "samples " << train_set.labels.size() << " train, "
        << val_set.labels.size() << " val\n"
        << "best epoch " << result.best_epoch << " val loss "
        << result.val_loss[static_cast<std::size_t>(result.best_epoch - 1)]
        << "\n";
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// train-svm

struct TrainSvmCommand {
  DatasetFlags data;
  EmbeddingFlags embedding;
  FeatureFlags features;
  SvmConfig config;
  std::string out_path;
  std::string objective_csv;

  void Add(CLI::App* app) {
    data.Add(app);
    embedding.Add(app);
    features.Add(app);
    app->add_option("--epochs", config.epochs, "Pegasos epochs")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--lambda", config.lambda, "Regularization strength")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", config.seed, "Shuffle seed")
        ->capture_default_str();
    app->add_option("--threads", config.threads, "Worker threads")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--out", out_path, "Model path (SVM1)")->required();
    app->add_option("--objective-csv", objective_csv,
                    "Per-epoch objective CSV");
  }

  int Run(std::ostream& out, std::ostream&) {
    const DatasetIndex train = data.Load();
    const NameEmbedder embedder = embedding.Load(train.objects());
    const SemanticDataset semantic = BuildSemanticDataset(train, embedder);
    const MlpModel mlp = LoadMlpCheckpoint(features.semantic_model);
    const auto visual = features.Visual();
    const FeatureBuilder builder(mlp, visual.get(), features.embedding);
    const SvmDataset set = BuildSvmDataset(semantic, builder);
    if (set.labels.empty()) throw TrainingError("no training samples");
    config.num_classes = static_cast<int>(train.predicates().size());
    config.track_objective = !objective_csv.empty();
    const SvmTrainResult result = TrainSvm(set.features, set.labels, config);
    SaveSvmModel(result.model, out_path);
    if (!objective_csv.empty()) {
      std::string csv = "epoch,objective\n";
      for (std::size_t e = 0; e < result.objective.size(); ++e) {
        csv += std::to_string(e + 1) + "," + FormatDouble(result.objective[e]) +
               "\n";
      }
      WriteTextAtomically(objective_csv, csv);
    }
    const double acc = PredicateAccuracy(
        PredictLabels(result.model, set.features), set.labels);
    out << "samples " << set.labels.size() << " (skipped " << set.skipped
        << "), features " << set.features.cols() << "\n"
        << "training accuracy " << acc << "\n";
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// predict / graph

// Everything needed to score pairs with trained models.
struct ModelFlags {
  EmbeddingFlags embedding;
  FeatureFlags features;
  std::string svm_model;

  void Add(CLI::App* app) {
    embedding.Add(app);
    features.Add(app);
    app->add_option("--svm-model", svm_model, "Predicate SVM (SVM1)")
        ->required()
        ->check(CLI::ExistingFile);
  }
};

class Predictor {
 public:
  Predictor(const ModelFlags& flags, const Dictionary& objects)
      : embedder_(flags.embedding.Load(objects)),
        mlp_(LoadMlpCheckpoint(flags.features.semantic_model)),
        svm_(LoadSvmModel(flags.svm_model)),
        visual_(flags.features.Visual()),
        builder_(mlp_, visual_.get(), flags.features.embedding) {}

  std::vector<PairPrediction> Predict(
      const std::string& image_id, const std::vector<ObjectInstance>& instances,
      int k) const {
    return PredictPairs(image_id, instances, embedder_, builder_, svm_, k);
  }

 private:
  NameEmbedder embedder_;
  MlpModel mlp_;
  SvmModel svm_;
  std::unique_ptr<VisualProvider> visual_;
  FeatureBuilder builder_;
};

struct PredictCommand {
  DatasetFlags data;
  InstanceFlags instances;
  ModelFlags models;
  int k = 3;
  std::string out_path;

  void Add(CLI::App* app) {
    data.Add(app, /*required=*/false);
    instances.Add(app);
    models.Add(app);
    app->add_option("--k", k, "Predicates kept per pair")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--out", out_path, "CSV destination (default stdout)");
  }

  int Run(std::ostream& out, std::ostream& err) const {
    const Dictionary objects = data.dicts.Objects();
    const Dictionary predicates = data.dicts.Predicates();
    std::optional<DatasetIndex> gold;
    if (!data.annotations.empty()) gold = data.Load();
    const auto images =
        instances.Load(gold ? &*gold : nullptr, objects, err);
    const Predictor predictor(models, objects);
    std::ostringstream csv;
    csv << "image_id,subject_id,object_id,rank,predicate_id,predicate,"
           "probability\n";
    for (const auto& [image_id, inst] : images) {
      for (const auto& pair : predictor.Predict(image_id, inst, k)) {
        for (std::size_t r = 0; r < pair.ranked.size(); ++r) {
          const auto& p = pair.ranked[r];
          csv << CsvField(image_id) << ',' << pair.subject << ','
              << pair.object << ',' << (r + 1) << ',' << p.predicate_id << ','
              << CsvField(predicates.Name(p.predicate_id)) << ','
              << FormatDouble(p.probability) << '\n';
        }
      }
    }
    Emit(out_path, csv.str(), out);
    return kExitOk;
  }
};

struct GraphCommand {
  DatasetFlags data;
  InstanceFlags instances;
  ModelFlags models;
  bool gold_predicates = false;
  int k = 3;
  double min_prob = 0.0;
  std::string format = "dot";
  std::string out_path;
  std::string out_dir;

  void Add(CLI::App* app) {
    data.Add(app, /*required=*/false);
    instances.Add(app);
    // Model flags are only needed without --gold-predicates.
    models.embedding.Add(app);
    app->add_option("--semantic-model", models.features.semantic_model,
                    "Semantic projection checkpoint (SPJ1)")
        ->check(CLI::ExistingFile);
    auto* f = app->add_option("--features", models.features.features,
                              "Visual features (RFV1)")
                  ->check(CLI::ExistingFile);
    auto* s = app->add_flag("--stub-visual", models.features.stub_visual,
                            "Use deterministic stub visual features");
    auto* o = app->add_flag("--semantic-only", models.features.semantic_only,
                            "Use the semantic embedding alone");
    f->excludes(s)->excludes(o);
    s->excludes(o);
    app->add_option("--stub-dim", models.features.stub_dim, "Stub width")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--stub-seed", models.features.stub_seed, "Stub seed")
        ->capture_default_str();
    app->add_option("--missing", models.features.missing,
                    "Pairs absent from --features: error, stub or skip")
        ->transform(CLI::CheckedTransformer(kMissingPolicies, CLI::ignore_case));
    app->add_option("--embedding", models.features.embedding,
                    "Semantic embedding layer: logits or hidden")
        ->transform(CLI::CheckedTransformer(kEmbeddingModes, CLI::ignore_case));
    app->add_option("--svm-model", models.svm_model, "Predicate SVM (SVM1)")
        ->check(CLI::ExistingFile);
    app->add_flag("--gold-predicates", gold_predicates,
                  "Use annotated predicates instead of models");
    app->add_option("--k", k, "Predicates kept per pair")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app->add_option("--min-prob", min_prob, "Drop edges below this probability")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--format", format, "dot or json")
        ->capture_default_str()
        ->check(CLI::IsMember({"dot", "json"}));
    auto* out = app->add_option("--out", out_path,
                                "Output file (default stdout)");
    auto* dir = app->add_option("--out-dir", out_dir,
                                "Write one file per image into this directory");
    out->excludes(dir);
  }

  int Run(std::ostream& out, std::ostream& err) const {
    const Dictionary objects = data.dicts.Objects();
    const Dictionary predicates = data.dicts.Predicates();
    std::optional<DatasetIndex> gold;
    if (!data.annotations.empty()) gold = data.Load();

    std::vector<SceneGraph> graphs;
    if (gold_predicates) {
      if (!gold) throw InvalidArgument("--gold-predicates needs --annotations");
      if (!instances.detections.empty()) {
        throw InvalidArgument("--gold-predicates cannot use --detections");
      }
      for (const auto& img : gold->images()) {
        if (!instances.image_id.empty() && img.image_id != instances.image_id) {
          continue;
        }
        graphs.push_back(AssembleSceneGraph(img.image_id, img.objects,
                                            GoldPairPredictions(img), k,
                                            min_prob));
      }
      if (graphs.empty() && !instances.image_id.empty()) {
        throw LookupError("image '" + instances.image_id + "' not found");
      }
    } else {
      if (models.features.semantic_model.empty() || models.svm_model.empty()) {
        throw InvalidArgument(
            "--semantic-model and --svm-model are required without "
            "--gold-predicates");
      }
      const auto images =
          instances.Load(gold ? &*gold : nullptr, objects, err);
      const Predictor predictor(models, objects);
      for (const auto& [image_id, inst] : images) {
        graphs.push_back(AssembleSceneGraph(
            image_id, inst, predictor.Predict(image_id, inst, k), k, min_prob));
      }
    }

    auto render = [&](const SceneGraph& g) {
      return format == "json" ? ToJson(g) + "\n"
                              : ToDot(g, &objects, &predicates);
    };
    if (!out_dir.empty()) {
      fs::create_directories(out_dir);
      for (const auto& g : graphs) {
        WriteTextAtomically(fs::path(out_dir) /
                                (SafeFileName(g.image_id) + "." + format),
                            render(g));
      }
      out << "wrote " << graphs.size() << " graphs to " << out_dir << "\n";
      return kExitOk;
    }
    if (graphs.size() != 1 && format == "json" && !out_path.empty()) {
      throw InvalidArgument(
          "--out with --format json needs exactly one graph; use --image-id "
          "or --out-dir");
    }
    std::string text;
    for (const auto& g : graphs) text += render(g);
    Emit(out_path, text, out);
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// query

struct QueryCommand {
  std::string pattern;
  std::string graph;
  std::string corpus;
  std::string method = "jaccard";
  int walk_length = 2;
  std::size_t limit = 0;
  std::string objects;
  std::string predicates;
  std::string out_path;

  void Add(CLI::App* app) {
    auto* p = app->add_option("--pattern", pattern,
                              "Triple pattern \"subject,predicate,object\"");
    auto* g = app->add_option("--graph", graph, "Query scene graph JSON")
                  ->check(CLI::ExistingFile);
    p->excludes(g);
    app->add_option("--corpus", corpus, "Directory of scene graph JSON files")
        ->required()
        ->check(CLI::ExistingDirectory);
    app->add_option("--method", method, "jaccard or walk")
        ->capture_default_str();
    app->add_option("--walk-length", walk_length, "Walk length for walk")
        ->capture_default_str()
        ->check(CLI::Range(1, 3));
    app->add_option("--limit", limit, "Maximum results (0 = all)")
        ->capture_default_str();
    app->add_option("--objects", objects, "Object dictionary (for --pattern)")
        ->check(CLI::ExistingFile);
    app->add_option("--predicates", predicates,
                    "Predicate dictionary (for --pattern)")
        ->check(CLI::ExistingFile);
    app->add_option("--out", out_path, "CSV destination (default stdout)");
  }

  int Run(std::ostream& out, std::ostream&) const {
    RankOptions options;
    options.method = ParseSimilarityMethod(method);
    options.walk_length = walk_length;
    options.limit = limit;

    ContextQuery query;
    if (!pattern.empty()) {
      if (objects.empty() || predicates.empty()) {
        throw InvalidArgument("--pattern needs --objects and --predicates");
      }
      query = ParseTriplePattern(pattern, ImportDictionary(objects),
                                 ImportDictionary(predicates));
    } else if (!graph.empty()) {
      query = FromJson(ReadTextFile(graph));
    } else {
      throw InvalidArgument("one of --pattern or --graph is required");
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(corpus)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
    std::vector<SceneGraph> graphs;
    for (const auto& f : files) {
      try {
        graphs.push_back(FromJson(ReadTextFile(f)));
      } catch (const ParseError& e) {
        throw ParseError(f.string() + ": " + e.what());
      }
    }
    Emit(out_path, RankingToCsv(RankByContext(query, graphs, options)), out);
    return kExitOk;
  }
};

// ---------------------------------------------------------------------------
// eval

struct EvalCommand {
  DictionaryFlags dicts;
  std::string gold;
  std::string pred;
  std::string metric;
  double iou = 0.5;
  std::string report;

  void Add(CLI::App* app) {
    dicts.Add(app);
    app->add_option("--gold", gold, "Gold annotations (VRD layout)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--pred", pred,
                    "Predictions: predict CSV, or detections JSON for map")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--metric", metric, "accuracy, recall@K or map")
        ->required();
    app->add_option("--iou", iou, "IoU threshold for map")
        ->capture_default_str();
    app->add_option("--report", report, "Also write a JSON report here");
  }

  int Run(std::ostream& out, std::ostream& err) const {
    const DatasetIndex index =
        LoadAnnotationsFile(gold, dicts.Objects(), dicts.Predicates());
    nlohmann::json doc = {{"metric", metric}};
    if (metric == "map") {
      EvalMap(index, doc, out, err);
    } else if (metric == "accuracy") {
      EvalRanked(index, 1, true, doc, out);
    } else if (metric.rfind("recall@", 0) == 0) {
      int k = 0;
      const std::string digits = metric.substr(7);
      auto res = std::from_chars(digits.data(), digits.data() + digits.size(), k);
      if (res.ec != std::errc() || res.ptr != digits.data() + digits.size() ||
          k < 1) {
        throw InvalidArgument("bad metric '" + metric + "'");
      }
      EvalRanked(index, k, false, doc, out);
    } else {
      throw InvalidArgument("unknown metric '" + metric +
                            "' (accuracy, recall@K, map)");
    }
    if (!report.empty()) WriteTextAtomically(report, doc.dump(2) + "\n");
    return kExitOk;
  }

 private:
  void EvalMap(const DatasetIndex& index, nlohmann::json& doc,
               std::ostream& out, std::ostream& err) const {
    auto loaded = LoadDetections(ReadTextFile(pred), index.objects());
    for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";
    std::vector<ImageGold> gold_boxes;
    for (const auto& img : index.images()) {
      ImageGold g{img.image_id, {}};
      for (const auto& o : img.objects) g.boxes.push_back({o.bbox, o.category_id});
      gold_boxes.push_back(std::move(g));
    }
    std::vector<ImageDetections> dets;
    for (const auto& [image_id, inst] : loaded.images) {
      ImageDetections d{image_id, {}};
      for (const auto& o : inst) {
        d.detections.push_back({o.bbox, o.category_id, o.score});
      }
      dets.push_back(std::move(d));
    }
    const MapResult r = MeanAveragePrecision(dets, gold_boxes, iou);
    if (r.empty_input) err << "warning: gold annotations contain no boxes\n";
    doc["value"] = r.mean_ap;
    doc["iou_threshold"] = iou;
    doc["empty_input"] = r.empty_input;
    nlohmann::json per = nlohmann::json::object();
    out << "map " << r.mean_ap << " (IoU " << iou << ", "
        << r.per_category.size() << " categories)\n";
    for (const auto& [c, ap] : r.per_category) {
      per[index.objects().Name(c)] = ap;
      out << "  " << index.objects().Name(c) << " " << ap << "\n";
    }
    doc["per_category"] = per;
  }

  void EvalRanked(const DatasetIndex& index, int k, bool accuracy,
                  nlohmann::json& doc, std::ostream& out) const {
    using PairKey = std::tuple<std::string, int, int>;
    std::map<PairKey, std::vector<std::pair<int, int>>> ranked;  // rank, id
    std::istringstream in(ReadTextFile(pred));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line_no == 1 || Trim(line).empty()) continue;  // header
      const auto f = ParseCsvLine(line);
      if (f.size() < 5) {
        throw ParseError(pred + ": line " + std::to_string(line_no) +
                         ": expected image_id,subject_id,object_id,rank,"
                         "predicate_id,...");
      }
      try {
        ranked[{f[0], std::stoi(f[1]), std::stoi(f[2])}].push_back(
            {std::stoi(f[3]), std::stoi(f[4])});
      } catch (const std::exception&) {
        throw ParseError(pred + ": line " + std::to_string(line_no) +
                         ": non-integer id");
      }
    }
    std::vector<std::vector<int>> lists;
    std::vector<int> labels;
    std::size_t missing = 0;
    for (const auto& img : index.images()) {
      for (const auto& rel : img.relationships) {
        if (rel.subject.instance_id == rel.object.instance_id) continue;
        auto it = ranked.find(
            {img.image_id, rel.subject.instance_id, rel.object.instance_id});
        std::vector<int> ids;
        if (it == ranked.end()) {
          ++missing;
          ids.assign(static_cast<std::size_t>(k), -1);
        } else {
          auto rows = it->second;
          std::sort(rows.begin(), rows.end());
          for (const auto& [rank, id] : rows) ids.push_back(id);
        }
        lists.push_back(std::move(ids));
        labels.push_back(rel.predicate_id);
      }
    }
    if (labels.empty()) throw InvalidArgument("gold file has no relationships");
    double value;
    if (accuracy) {
      std::vector<int> top;
      for (const auto& l : lists) top.push_back(l.empty() ? -1 : l[0]);
      value = PredicateAccuracy(top, labels);
    } else {
      value = RecallAtK(lists, labels, k);
    }
    doc["value"] = value;
    doc["samples"] = labels.size();
    doc["missing_pairs"] = missing;
    out << metric << " " << value << " over " << labels.size() << " pairs";
    if (missing > 0) out << " (" << missing << " pairs had no prediction)";
    out << "\n";
  }
};

// ---------------------------------------------------------------------------
// embed-cache

struct EmbedCacheCommand {
  std::string vectors;
  std::string objects;
  std::string predicates;
  OovPolicy oov = OovPolicy::kZeroVector;
  std::string out_path;

  void Add(CLI::App* app) {
    app->add_option("--vectors", vectors, "word2vec file (text or binary)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--objects", objects, "Object dictionary JSON")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--predicates", predicates,
                    "Also cache predicate names")
        ->check(CLI::ExistingFile);
    app->add_option("--oov", oov, "Out-of-vocabulary names: error or zero")
        ->transform(CLI::CheckedTransformer(kOovPolicies, CLI::ignore_case));
    app->add_option("--out", out_path, "Cache JSON path")->required();
  }

  int Run(std::ostream& out, std::ostream&) const {
    std::vector<Dictionary> dicts = {ImportDictionary(objects)};
    if (!predicates.empty()) dicts.push_back(ImportDictionary(predicates));
    std::vector<const Dictionary*> ptrs;
    for (const auto& d : dicts) ptrs.push_back(&d);
    EmbeddingParseOptions options;
    options.keep_lowercase = VocabularyOf(ptrs);
    const EmbeddingTable table = LoadWord2Vec(vectors, options);
    std::map<std::string, std::vector<double>> cache;
    for (const auto& d : dicts) {
      for (const auto& name : d.names()) {
        cache[name] = LookupName(table, name, oov);
      }
    }
    WriteTextAtomically(out_path, EmbeddingCacheToJson(cache));
    out << "cached " << cache.size() << " names of dimension "
        << table.dimension() << " (" << table.size()
        << " vectors kept)\n";
    return kExitOk;
  }
};

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Scene graphs from visual relationship annotations", "relgraph"};
  app.require_subcommand(1, 1);
  app.failure_message(CLI::FailureMessage::help);

  StatsCommand stats;
  SplitCommand split;
  TrainSemanticCommand train_semantic;
  TrainSvmCommand train_svm;
  PredictCommand predict;
  GraphCommand graph;
  QueryCommand query;
  EvalCommand eval;
  EmbedCacheCommand embed_cache;

  auto* stats_cmd =
      app.add_subcommand("stats", "Per-image object and relationship counts");
  stats.Add(stats_cmd);
  auto* split_cmd =
      app.add_subcommand("split", "Seeded train/val/test split manifests");
  split.Add(split_cmd);
  auto* train_semantic_cmd = app.add_subcommand(
      "train-semantic", "Train the word-vector projection network");
  train_semantic.Add(train_semantic_cmd);
  auto* train_svm_cmd =
      app.add_subcommand("train-svm", "Train the one-vs-rest predicate SVM");
  train_svm.Add(train_svm_cmd);
  auto* predict_cmd =
      app.add_subcommand("predict", "Top-k predicates for every object pair");
  predict.Add(predict_cmd);
  auto* graph_cmd = app.add_subcommand("graph", "Emit scene graphs");
  graph.Add(graph_cmd);
  auto* query_cmd =
      app.add_subcommand("query", "Rank a scene graph corpus by context");
  query.Add(query_cmd);
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate predictions");
  eval.Add(eval_cmd);
  auto* embed_cache_cmd = app.add_subcommand(
      "embed-cache", "Export name embeddings as a JSON cache");
  embed_cache.Add(embed_cache_cmd);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (stats_cmd->parsed()) return stats.Run(out, err);
    if (split_cmd->parsed()) return split.Run(out, err);
    if (train_semantic_cmd->parsed()) return train_semantic.Run(out, err);
    if (train_svm_cmd->parsed()) return train_svm.Run(out, err);
    if (predict_cmd->parsed()) return predict.Run(out, err);
    if (graph_cmd->parsed()) return graph.Run(out, err);
    if (query_cmd->parsed()) return query.Run(out, err);
    if (eval_cmd->parsed()) return eval.Run(out, err);
    if (embed_cache_cmd->parsed()) return embed_cache.Run(out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace relgraph::cli
