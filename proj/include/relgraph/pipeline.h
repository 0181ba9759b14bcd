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

#ifndef RELGRAPH_PIPELINE_H_
#define RELGRAPH_PIPELINE_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

#include "relgraph/dataset.h"
#include "relgraph/predsvm.h"
#include "relgraph/scene_graph.h"
#include "relgraph/semproj.h"
#include "relgraph/visfeat.h"
#include "relgraph/wordvec.h"

namespace relgraph {

// Lower-cased tokens of every name in the dictionaries; used to filter large
// vector files down to what the pipeline can look up.
std::unordered_set<std::string> VocabularyOf(
    const std::vector<const Dictionary*>& dictionaries);

// Word vectors for each object category, resolved once.
class NameEmbedder {
 public:
  NameEmbedder(const EmbeddingTable& table, const Dictionary& objects,
               OovPolicy policy = OovPolicy::kError);

  // From an embedding cache ({name: vector}). Every category name must be
  // present (LookupError) and all vectors must share one length.
  static NameEmbedder FromCache(
      const std::map<std::string, std::vector<double>>& cache,
      const Dictionary& objects);

  std::size_t dimension() const { return dimension_; }
  // Concatenated (subject, object) word vectors, length 2 * dimension().
  Eigen::VectorXd PairInput(int subject_category, int object_category) const;

 private:
  NameEmbedder() = default;

  std::size_t dimension_ = 0;
  std::vector<std::vector<double>> vectors_;
};

// One row per gold relationship whose subject and object are distinct
// instances.
struct SemanticDataset {
  Eigen::MatrixXd inputs;
  std::vector<int> labels;
  std::vector<RelationshipKey> keys;
  std::size_t skipped_self_pairs = 0;
};

SemanticDataset BuildSemanticDataset(const DatasetIndex& index,
                                     const NameEmbedder& embedder);

// Builds SVM inputs: the semantic embedding of the pair, optionally followed
// by its visual feature.
class FeatureBuilder {
 public:
  // `visual` may be null (semantic-only). Both pointers must outlive the
  // builder.
  FeatureBuilder(const MlpModel& semantic_model, const VisualProvider* visual,
                 EmbeddingMode mode = EmbeddingMode::kLogits);

  // nullopt when the visual provider skips the key.
  std::optional<Eigen::VectorXd> Build(const Eigen::VectorXd& pair_input,
                                       const RelationshipKey& key) const;

 private:
  const MlpModel& semantic_model_;
  const VisualProvider* visual_;
  EmbeddingMode mode_;
};

struct SvmDataset {
  Eigen::MatrixXd features;
  std::vector<int> labels;
  std::vector<RelationshipKey> keys;
  std::size_t skipped = 0;
};

SvmDataset BuildSvmDataset(const SemanticDataset& semantic,
                           const FeatureBuilder& builder);

// Ranked predicates for every ordered pair of `instances`.
std::vector<PairPrediction> PredictPairs(
    const std::string& image_id, const std::vector<ObjectInstance>& instances,
    const NameEmbedder& embedder, const FeatureBuilder& builder,
    const SvmModel& svm, int k);

// Argmax predicate for every row of `features`.
std::vector<int> PredictLabels(const SvmModel& svm,
                               const Eigen::MatrixXd& features);

}  // namespace relgraph

#endif  // RELGRAPH_PIPELINE_H_
