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

#include "relgraph/pipeline.h"

#include "relgraph/errors.h"
#include "relgraph/softmax.h"
#include "relgraph/text_util.h"

namespace relgraph {

std::unordered_set<std::string> VocabularyOf(
    const std::vector<const Dictionary*>& dictionaries) {
  std::unordered_set<std::string> vocab;
  for (const Dictionary* dict : dictionaries) {
    for (const auto& name : dict->names()) {
      for (const auto& token : SplitWhitespace(name)) {
        vocab.insert(ToLowerAscii(token));
      }
    }
  }
  return vocab;
}

NameEmbedder::NameEmbedder(const EmbeddingTable& table,
                           const Dictionary& objects, OovPolicy policy)
    : dimension_(table.dimension()) {
  vectors_.reserve(objects.size());
  for (const auto& name : objects.names()) {
    vectors_.push_back(LookupName(table, name, policy));
  }
}

NameEmbedder NameEmbedder::FromCache(
    const std::map<std::string, std::vector<double>>& cache,
    const Dictionary& objects) {
  NameEmbedder e;
  e.vectors_.reserve(objects.size());
  for (const auto& name : objects.names()) {
    auto it = cache.find(name);
    if (it == cache.end()) {
      throw LookupError("embedding cache has no entry for '" + name + "'");
    }
    if (e.vectors_.empty()) {
      e.dimension_ = it->second.size();
    } else if (it->second.size() != e.dimension_) {
      throw DimensionError("embedding cache entry '" + name + "' has length " +
                           std::to_string(it->second.size()) + ", expected " +
                           std::to_string(e.dimension_));
    }
    e.vectors_.push_back(it->second);
  }
  return e;
}

Eigen::VectorXd NameEmbedder::PairInput(int subject_category,
                                        int object_category) const {
  auto at = [&](int c) -> const std::vector<double>& {
    if (c < 0 || static_cast<std::size_t>(c) >= vectors_.size()) {
      throw BoundsError("category " + std::to_string(c) + " out of range");
    }
    return vectors_[static_cast<std::size_t>(c)];
  };
  const std::vector<double> v = ConcatPair(at(subject_category),
                                           at(object_category));
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

SemanticDataset BuildSemanticDataset(const DatasetIndex& index,
                                     const NameEmbedder& embedder) {
  SemanticDataset out;
  std::vector<Eigen::VectorXd> rows;
  for (const auto& img : index.images()) {
    for (const auto& rel : img.relationships) {
      if (rel.subject.instance_id == rel.object.instance_id) {
        ++out.skipped_self_pairs;
        continue;
      }
      rows.push_back(embedder.PairInput(rel.subject.category_id,
                                        rel.object.category_id));
      out.labels.push_back(rel.predicate_id);
      out.keys.push_back({img.image_id, rel.subject.instance_id,
                          rel.object.instance_id});
    }
  }
  out.inputs.resize(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(2 * embedder.dimension()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.inputs.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return out;
}

FeatureBuilder::FeatureBuilder(const MlpModel& semantic_model,
                               const VisualProvider* visual,
                               EmbeddingMode mode)
    : semantic_model_(semantic_model), visual_(visual), mode_(mode) {}

std::optional<Eigen::VectorXd> FeatureBuilder::Build(
    const Eigen::VectorXd& pair_input, const RelationshipKey& key) const {
  const Eigen::VectorXd semantic =
      SemanticEmbedding(semantic_model_, pair_input, mode_);
  std::optional<std::vector<double>> visual;
  if (visual_) {
    visual = visual_->Get(key);
    if (!visual) return std::nullopt;
  }
  const std::vector<double> joined = ConcatFeatures(
      std::span<const double>(semantic.data(),
                              static_cast<std::size_t>(semantic.size())),
      visual ? std::optional<std::span<const double>>(*visual) : std::nullopt);
  return Eigen::Map<const Eigen::VectorXd>(
      joined.data(), static_cast<Eigen::Index>(joined.size()));
}

SvmDataset BuildSvmDataset(const SemanticDataset& semantic,
                           const FeatureBuilder& builder) {
  SvmDataset out;
  std::vector<Eigen::VectorXd> rows;
  for (Eigen::Index i = 0; i < semantic.inputs.rows(); ++i) {
    const auto& key = semantic.keys[static_cast<std::size_t>(i)];
    auto features = builder.Build(semantic.inputs.row(i).transpose(), key);
    if (!features) {
      ++out.skipped;
      continue;
    }
    rows.push_back(std::move(*features));
    out.labels.push_back(semantic.labels[static_cast<std::size_t>(i)]);
    out.keys.push_back(key);
  }
  const Eigen::Index width = rows.empty() ? 0 : rows.front().size();
  out.features.resize(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.features.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return out;
}

std::vector<PairPrediction> PredictPairs(
    const std::string& image_id, const std::vector<ObjectInstance>& instances,
    const NameEmbedder& embedder, const FeatureBuilder& builder,
    const SvmModel& svm, int k) {
  std::vector<PairPrediction> out;
  for (const auto& [s, o] :
       EnumeratePairs(instances.size(), PairMode::kOrdered)) {
    const ObjectInstance& subject = instances[s];
    const ObjectInstance& object = instances[o];
    const RelationshipKey key{image_id, subject.instance_id,
                              object.instance_id};
    auto features = builder.Build(
        embedder.PairInput(subject.category_id, object.category_id), key);
    if (!features) continue;
    out.push_back(
        {subject.instance_id, object.instance_id, TopK(svm, *features, k)});
  }
  return out;
}

std::vector<int> PredictLabels(const SvmModel& svm,
                               const Eigen::MatrixXd& features) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(features.rows()));
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    out.push_back(static_cast<int>(
        ArgMax(DecisionScores(svm, features.row(i).transpose()))));
  }
  return out;
}

}  // namespace relgraph
