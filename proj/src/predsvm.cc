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

#include "relgraph/predsvm.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

#include "relgraph/binary_io.h"
#include "relgraph/errors.h"
#include "relgraph/file_util.h"
#include "relgraph/rng.h"
#include "relgraph/softmax.h"

namespace relgraph {

SvmModel SvmModel::Zeros(Eigen::Index classes, Eigen::Index features) {
  if (classes <= 0 || features <= 0) {
    throw InvalidArgument("SVM dimensions must be positive");
  }
  SvmModel m;
  m.w = Eigen::MatrixXd::Zero(classes, features);
  m.b = Eigen::VectorXd::Zero(classes);
  m.mean = Eigen::VectorXd::Zero(features);
  m.scale = Eigen::VectorXd::Ones(features);
  return m;
}

void SvmModel::Validate() const {
  if (w.rows() == 0 || w.cols() == 0 || b.size() != w.rows() ||
      mean.size() != w.cols() || scale.size() != w.cols()) {
    throw DimensionError("inconsistent SVM parameter shapes");
  }
  if (!w.allFinite() || !b.allFinite() || !mean.allFinite() ||
      !scale.allFinite()) {
    throw InvalidArgument("SVM parameters are not finite");
  }
  if ((scale.array() <= 0.0).any()) {
    throw InvalidArgument("SVM scale entries must be positive");
  }
}

bool operator==(const SvmModel& a, const SvmModel& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.w, b.w) && same(a.b, b.b) && same(a.mean, b.mean) &&
         same(a.scale, b.scale);
}

std::vector<double> ConcatFeatures(
    std::optional<std::span<const double>> semantic,
    std::optional<std::span<const double>> visual) {
  if (!semantic && !visual) {
    throw InvalidArgument("need at least one of semantic or visual features");
  }
  std::vector<double> out;
  out.reserve((semantic ? semantic->size() : 0) +
              (visual ? visual->size() : 0));
  for (auto part : {semantic, visual}) {
    if (!part) continue;
    for (double v : *part) {
      if (!std::isfinite(v)) throw InvalidArgument("feature is not finite");
      out.push_back(v);
    }
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> StandardizationFor(
    const Eigen::MatrixXd& samples) {
  const double n = static_cast<double>(samples.rows());
  Eigen::VectorXd mean = samples.colwise().sum().transpose() / n;
  Eigen::VectorXd scale(samples.cols());
  for (Eigen::Index c = 0; c < samples.cols(); ++c) {
    const double var = (samples.col(c).array() - mean[c]).square().sum() / n;
    const double sd = std::sqrt(var);
    scale[c] = sd > 0.0 && std::isfinite(sd) ? sd : 1.0;
  }
  return {mean, scale};
}

std::pair<Eigen::VectorXd, double> TrainOneVsRest(
    const Eigen::MatrixXd& standardized, const std::vector<int>& labels,
    int class_id, const SvmConfig& config, std::vector<double>* objective) {
  const Eigen::Index n = standardized.rows();
  const Eigen::Index d = standardized.cols();
  const double lambda = config.lambda;
  const double radius = 1.0 / std::sqrt(lambda);

  // w = a * v over the augmented input [x, 1]; the scalar a makes the
  // (1 - 1/t) shrink O(1).
  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  double v_bias = 0.0;
  double a = 1.0;
  double v_norm2 = 0.0;

  Eigen::VectorXd x_norm2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x_norm2[i] = standardized.row(i).squaredNorm() + 1.0;
  }

  Rng rng(HashCombine(config.seed, static_cast<std::uint64_t>(class_id)));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::uint64_t t = 0;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.Shuffle(order);
    for (Eigen::Index i : order) {
      ++t;
      const double y = labels[static_cast<std::size_t>(i)] == class_id ? 1.0
                                                                         : -1.0;
      const double eta = 1.0 / (lambda * static_cast<double>(t));
      const double vx = standardized.row(i).dot(v) + v_bias;
      const double margin = y * a * vx;

      const double shrink = 1.0 - 1.0 / static_cast<double>(t);
      if (shrink <= 0.0) {
        v.setZero();
        v_bias = 0.0;
        v_norm2 = 0.0;
        a = 1.0;
      } else {
        a *= shrink;
      }
      if (margin < 1.0) {
        const double c = eta * y / a;
        const double vx_now = shrink <= 0.0 ? 0.0 : vx;
        v.noalias() += c * standardized.row(i).transpose();
        v_bias += c;
        v_norm2 += 2.0 * c * vx_now + c * c * x_norm2[i];
      }
      const double w_norm = a * std::sqrt(std::max(v_norm2, 0.0));
      if (w_norm > radius) a *= radius / w_norm;
      if (a < 1e-9) {
        v *= a;
        v_bias *= a;
        v_norm2 = v.squaredNorm() + v_bias * v_bias;
        a = 1.0;
      }
    }
    if (objective) {
      const Eigen::VectorXd w = a * v;
      const double b = a * v_bias;
      double hinge = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double y =
            labels[static_cast<std::size_t>(i)] == class_id ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * (standardized.row(i).dot(w) + b));
      }
      objective->push_back(0.5 * lambda * (w.squaredNorm() + b * b) +
                           hinge / static_cast<double>(n));
    }
  }
  return {a * v, a * v_bias};
}

SvmTrainResult TrainSvm(const Eigen::MatrixXd& samples,
                        const std::vector<int>& labels,
                        const SvmConfig& config) {
  if (!(config.lambda > 0.0) || config.epochs <= 0) {
    throw InvalidArgument("SVM lambda and epochs must be positive");
  }
  if (samples.rows() == 0 || samples.cols() == 0) {
    throw TrainingError("SVM training set is empty");
  }
  if (static_cast<std::size_t>(samples.rows()) != labels.size()) {
    throw DimensionError("SVM sample and label counts differ");
  }
  if (!samples.allFinite()) throw TrainingError("SVM features are not finite");
  const int max_label = *std::max_element(labels.begin(), labels.end());
  const int classes = config.num_classes > 0 ? config.num_classes
                                             : max_label + 1;
  for (int y : labels) {
    if (y < 0 || y >= classes) {
      throw BoundsError("SVM label " + std::to_string(y) +
                        " out of range [0, " + std::to_string(classes) + ")");
    }
  }
  if (std::set<int>(labels.begin(), labels.end()).size() < 2) {
    throw TrainingError("SVM training needs at least two distinct labels");
  }

  SvmTrainResult result;
  SvmModel& model = result.model;
  model = SvmModel::Zeros(classes, samples.cols());
  std::tie(model.mean, model.scale) = StandardizationFor(samples);
  const Eigen::MatrixXd z =
      (samples.rowwise() - model.mean.transpose()).array().rowwise() /
      model.scale.transpose().array();

  std::vector<std::vector<double>> objectives(
      static_cast<std::size_t>(classes));
  auto train_class = [&](int c) {
    auto [w, b] = TrainOneVsRest(
        z, labels, c, config,
        config.track_objective ? &objectives[static_cast<std::size_t>(c)]
                               : nullptr);
    model.w.row(c) = w.transpose();
    model.b[c] = b;
  };

  const int threads = std::clamp(config.threads, 1, classes);
  if (threads == 1) {
    for (int c = 0; c < classes; ++c) train_class(c);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) {
      pool.emplace_back([&] {
        for (int c = next++; c < classes; c = next++) train_class(c);
      });
    }
  }

  if (config.track_objective) {
    result.objective.assign(static_cast<std::size_t>(config.epochs), 0.0);
    // Summed in class order so the total is independent of scheduling.
    for (const auto& per_class : objectives) {
      for (std::size_t e = 0; e < per_class.size(); ++e) {
        result.objective[e] += per_class[e];
      }
    }
  }
  model.Validate();
  return result;
}

Eigen::VectorXd DecisionScores(const SvmModel& model,
                               const Eigen::VectorXd& x) {
  if (x.size() != model.num_features()) {
    throw DimensionError("feature vector has length " +
                         std::to_string(x.size()) + ", model expects " +
                         std::to_string(model.num_features()));
  }
  const Eigen::VectorXd z =
      ((x - model.mean).array() / model.scale.array()).matrix();
  return model.w * z + model.b;
}

Eigen::VectorXd PredictProba(const SvmModel& model, const Eigen::VectorXd& x) {
  return Softmax(DecisionScores(model, x));
}

std::vector<RankedPredicate> TopKOf(const Eigen::VectorXd& probs, int k) {
  if (k < 1 || k > probs.size()) {
    throw BoundsError("k = " + std::to_string(k) + " outside [1, " +
                      std::to_string(probs.size()) + "]");
  }
  std::vector<int> ids(static_cast<std::size_t>(probs.size()));
  std::iota(ids.begin(), ids.end(), 0);
  std::partial_sort(ids.begin(), ids.begin() + k, ids.end(),
                    [&](int a, int b) {
                      if (probs[a] != probs[b]) return probs[a] > probs[b];
                      return a < b;
                    });
  std::vector<RankedPredicate> out;
  for (int i = 0; i < k; ++i) {
    out.push_back({ids[static_cast<std::size_t>(i)],
                   probs[ids[static_cast<std::size_t>(i)]]});
  }
  return out;
}

std::vector<RankedPredicate> TopK(const SvmModel& model,
                                  const Eigen::VectorXd& x, int k) {
  return TopKOf(PredictProba(model, x), k);
}

void WriteSvmModel(const SvmModel& model, std::ostream& out) {
  model.Validate();
  binio::WriteMagic(out, "SVM1");
  binio::WriteU32(out, static_cast<std::uint32_t>(model.num_classes()));
  binio::WriteU32(out, static_cast<std::uint32_t>(model.num_features()));
  binio::WriteF64Block(out, {model.mean.data(),
                             static_cast<std::size_t>(model.mean.size())});
  binio::WriteF64Block(out, {model.scale.data(),
                             static_cast<std::size_t>(model.scale.size())});
  binio::WriteF64Block(
      out, {model.b.data(), static_cast<std::size_t>(model.b.size())});
  for (Eigen::Index r = 0; r < model.w.rows(); ++r) {
    for (Eigen::Index c = 0; c < model.w.cols(); ++c) {
      binio::WriteF64(out, model.w(r, c));
    }
  }
}

SvmModel ReadSvmModel(std::istream& in) {
  binio::Reader reader(in, "SVM1 model");
  reader.ExpectMagic("SVM1");
  const std::uint32_t classes = reader.ReadU32("class count");
  const std::uint32_t features = reader.ReadU32("feature count");
  if (classes == 0 || features == 0) {
    reader.Fail("class and feature counts must be positive");
  }
  SvmModel m = SvmModel::Zeros(classes, features);
  reader.ReadF64Block({m.mean.data(), features}, "mean");
  reader.ReadF64Block({m.scale.data(), features}, "scale");
  reader.ReadF64Block({m.b.data(), classes}, "bias");
  for (Eigen::Index r = 0; r < m.w.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.w.cols(); ++c) {
      m.w(r, c) = reader.ReadF64("weights");
    }
  }
  try {
    m.Validate();
  } catch (const Error& e) {
    reader.Fail(e.what());
  }
  return m;
}

void SaveSvmModel(const SvmModel& model, const std::filesystem::path& path) {
  WriteFileAtomically(
      path, [&](std::ostream& out) { WriteSvmModel(model, out); }, true);
}

SvmModel LoadSvmModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return ReadSvmModel(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace relgraph
