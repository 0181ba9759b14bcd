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

#ifndef RELGRAPH_SEMPROJ_H_
#define RELGRAPH_SEMPROJ_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace relgraph {

// Feed-forward network that projects a concatenated (subject, object) word
// vector pair onto predicate logits:
//
//   hidden = relu(w1 * x + b1)
//   logits = w2 * hidden + b2
//
// A hidden width of 0 removes the hidden layer (logits = w2 * x + b2), which
// turns the model into multinomial logistic regression.
struct MlpModel {
  Eigen::MatrixXd w1;  // hidden x input
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd w2;  // classes x hidden (or classes x input when hidden = 0)
  Eigen::VectorXd b2;  // classes

  Eigen::Index input_dim() const {
    return hidden_dim() > 0 ? w1.cols() : w2.cols();
  }
  Eigen::Index hidden_dim() const { return w1.rows(); }
  Eigen::Index num_classes() const { return w2.rows(); }

  // All-zero parameters.
  static MlpModel Zeros(Eigen::Index input, Eigen::Index hidden,
                        Eigen::Index classes);
  // Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static MlpModel GlorotUniform(Eigen::Index input, Eigen::Index hidden,
                                Eigen::Index classes, std::uint64_t seed);

  // Throws DimensionError when the shapes disagree, InvalidArgument when an
  // entry is not finite.
  void Validate() const;

  std::size_t ParameterCount() const;

  friend bool operator==(const MlpModel& a, const MlpModel& b);
};

struct ForwardResult {
  Eigen::VectorXd hidden;  // empty when the model has no hidden layer
  Eigen::VectorXd logits;
  Eigen::VectorXd probs;
};

ForwardResult Forward(const MlpModel& model, const Eigen::VectorXd& x);

enum class EmbeddingMode {
  kLogits,  // pre-softmax output layer (width = number of predicates)
  kHidden,  // hidden activations (width = hidden size)
};

// The semantic embedding of a pair: the output layer before the softmax.
Eigen::VectorXd SemanticEmbedding(const MlpModel& model,
                                  const Eigen::VectorXd& x,
                                  EmbeddingMode mode = EmbeddingMode::kLogits);

// Cross-entropy of the softmax output against `label`.
double CrossEntropy(const MlpModel& model, const Eigen::VectorXd& x, int label);

// Gradient of CrossEntropy with respect to every parameter, laid out in the
// same shapes as the model.
MlpModel CrossEntropyGradient(const MlpModel& model, const Eigen::VectorXd& x,
                              int label);

// Compares CrossEntropyGradient with central finite differences and returns
// max |g_analytic - g_fd| / max(1e-12, |g_analytic| + |g_fd|) over all
// parameters. epsilon must lie in (0, 1e-2].
double GradCheck(const MlpModel& model, const Eigen::VectorXd& x, int label,
                 double epsilon);

struct TrainConfig {
  double learning_rate = 0.05;
  int epochs = 100;
  int batch_size = 32;
  std::uint64_t seed = 0;
  // Return the epoch with the lowest validation loss instead of the last one.
  bool early_stopping = true;
  Eigen::Index hidden = 300;
  bool log_progress = false;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> train_loss;  // one entry per epoch
  std::vector<double> val_loss;
  int best_epoch = 0;  // 1-based, earliest minimum of val_loss
};

// Mini-batch gradient descent on mean cross-entropy. Samples are rows of
// `samples`; `num_classes` fixes the output width.
TrainResult TrainMlp(const Eigen::MatrixXd& samples,
                     const std::vector<int>& labels,
                     const Eigen::MatrixXd& val_samples,
                     const std::vector<int>& val_labels, int num_classes,
                     const TrainConfig& config);

// Mean cross-entropy over a sample matrix.
double MeanCrossEntropy(const MlpModel& model, const Eigen::MatrixXd& samples,
                        const std::vector<int>& labels);

// "SPJ1" checkpoint: magic, u32 hidden, u32 classes, then float64
// little-endian blocks w1, b1, w2, b2 (matrices row-major). The input width is
// recovered from the payload length.
void WriteMlpCheckpoint(const MlpModel& model, std::ostream& out);
MlpModel ReadMlpCheckpoint(std::istream& in);
void SaveMlpCheckpoint(const MlpModel& model,
                       const std::filesystem::path& path);
MlpModel LoadMlpCheckpoint(const std::filesystem::path& path);

// CSV: epoch,train_loss,val_loss
std::string LossCurvesToCsv(const TrainResult& result);

}  // namespace relgraph

#endif  // RELGRAPH_SEMPROJ_H_
