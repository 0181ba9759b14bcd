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

#ifndef RELGRAPH_PREDSVM_H_
#define RELGRAPH_PREDSVM_H_

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace relgraph {

// One-vs-rest linear SVM over predicate classes. Inputs are standardized with
// the training-set mean and scale before the linear map:
//
//   scores = w * ((x - mean) / scale) + b
struct SvmModel {
  Eigen::MatrixXd w;      // classes x features
  Eigen::VectorXd b;      // classes
  Eigen::VectorXd mean;   // features
  Eigen::VectorXd scale;  // features, all > 0

  Eigen::Index num_classes() const { return w.rows(); }
  Eigen::Index num_features() const { return w.cols(); }

  // Zero weights with identity standardization.
  static SvmModel Zeros(Eigen::Index classes, Eigen::Index features);

  void Validate() const;

  friend bool operator==(const SvmModel& a, const SvmModel& b);
};

struct SvmConfig {
  double lambda = 1e-4;
  int epochs = 100;
  std::uint64_t seed = 0;
  // 0 infers max(label) + 1.
  int num_classes = 0;
  // Worker threads for the per-class subproblems. The result does not depend
  // on this value.
  int threads = 1;
  // Record the objective after every epoch (costs one extra pass).
  bool track_objective = true;
};

struct SvmTrainResult {
  SvmModel model;
  // Regularized hinge objective after each epoch, summed over classes.
  std::vector<double> objective;
};

// Semantic features first, then visual. Either part may be absent; both
// absent is an InvalidArgument.
std::vector<double> ConcatFeatures(
    std::optional<std::span<const double>> semantic,
    std::optional<std::span<const double>> visual);

// Per-feature mean and population standard deviation; zero deviation maps to
// a scale of 1.
std::pair<Eigen::VectorXd, Eigen::VectorXd> StandardizationFor(
    const Eigen::MatrixXd& samples);

// Pegasos subgradient descent for one class against the rest. `standardized`
// rows are already centred and scaled. The bias is learned as the weight of a
// constant feature. Returns (weights, bias) and appends per-epoch objective
// values when `objective` is given. The shuffle stream is seeded by
// HashCombine(config.seed, class_id).
std::pair<Eigen::VectorXd, double> TrainOneVsRest(
    const Eigen::MatrixXd& standardized, const std::vector<int>& labels,
    int class_id, const SvmConfig& config,
    std::vector<double>* objective = nullptr);

SvmTrainResult TrainSvm(const Eigen::MatrixXd& samples,
                        const std::vector<int>& labels,
                        const SvmConfig& config);

Eigen::VectorXd DecisionScores(const SvmModel& model, const Eigen::VectorXd& x);

// Softmax over the decision scores.
Eigen::VectorXd PredictProba(const SvmModel& model, const Eigen::VectorXd& x);

struct RankedPredicate {
  int predicate_id = 0;
  double probability = 0.0;
  friend bool operator==(const RankedPredicate&,
                         const RankedPredicate&) = default;
};

// k most probable classes, descending; equal probabilities rank the lower id
// first. Throws BoundsError unless 1 <= k <= classes.
std::vector<RankedPredicate> TopK(const SvmModel& model,
                                  const Eigen::VectorXd& x, int k);
std::vector<RankedPredicate> TopKOf(const Eigen::VectorXd& probs, int k);

// "SVM1" | u32 classes | u32 features | float64 LE blocks mean, scale, b, w
// (w row-major).
void WriteSvmModel(const SvmModel& model, std::ostream& out);
SvmModel ReadSvmModel(std::istream& in);
void SaveSvmModel(const SvmModel& model, const std::filesystem::path& path);
SvmModel LoadSvmModel(const std::filesystem::path& path);

}  // namespace relgraph

#endif  // RELGRAPH_PREDSVM_H_
