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

#include "relgraph/semproj.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <numeric>
#include <sstream>

#include "relgraph/binary_io.h"
#include "relgraph/errors.h"
#include "relgraph/file_util.h"
#include "relgraph/rng.h"
#include "relgraph/softmax.h"

namespace relgraph {
namespace {

constexpr char kMagic[] = "SPJ1";

// Visits every parameter block in checkpoint order.
template <typename Model, typename Fn>
void ForEachBlock(Model& m, Fn&& fn) {
  fn(m.w1);
  fn(m.b1);
  fn(m.w2);
  fn(m.b2);
}

void CheckInput(const MlpModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.input_dim()) {
    throw DimensionError("input has length " + std::to_string(x.size()) +
                         ", model expects " +
                         std::to_string(model.input_dim()));
  }
  if (!x.allFinite()) throw InvalidArgument("input vector is not finite");
}

void CheckLabel(const MlpModel& model, int label) {
  if (label < 0 || label >= model.num_classes()) {
    throw BoundsError("label " + std::to_string(label) + " out of range [0, " +
                      std::to_string(model.num_classes()) + ")");
  }
}

}  // namespace

MlpModel MlpModel::Zeros(Eigen::Index input, Eigen::Index hidden,
                         Eigen::Index classes) {
  if (input <= 0 || hidden < 0 || classes <= 0) {
    throw InvalidArgument("MLP dimensions must be positive");
  }
  MlpModel m;
  m.w1 = Eigen::MatrixXd::Zero(hidden, hidden > 0 ? input : 0);
  m.b1 = Eigen::VectorXd::Zero(hidden);
  m.w2 = Eigen::MatrixXd::Zero(classes, hidden > 0 ? hidden : input);
  m.b2 = Eigen::VectorXd::Zero(classes);
  return m;
}

MlpModel MlpModel::GlorotUniform(Eigen::Index input, Eigen::Index hidden,
                                 Eigen::Index classes, std::uint64_t seed) {
  MlpModel m = Zeros(input, hidden, classes);
  Rng rng(seed);
  auto fill = [&](Eigen::MatrixXd& w) {
    const double limit =
        std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    // Row-major fill so the draw order does not depend on storage order.
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        w(r, c) = rng.Uniform(-limit, limit);
      }
    }
  };
  fill(m.w1);
  fill(m.w2);
  return m;
}

void MlpModel::Validate() const {
  const Eigen::Index h = hidden_dim();
  if (b1.size() != h || w2.rows() != b2.size() || b2.size() == 0 ||
      (h > 0 && (w2.cols() != h || w1.cols() == 0)) ||
      (h == 0 && w1.cols() != 0) || w2.cols() == 0) {
    throw DimensionError("inconsistent MLP parameter shapes");
  }
  if (!w1.allFinite() || !b1.allFinite() || !w2.allFinite() ||
      !b2.allFinite()) {
    throw InvalidArgument("MLP parameters are not finite");
  }
}

std::size_t MlpModel::ParameterCount() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() +
                                  b2.size());
}

bool operator==(const MlpModel& a, const MlpModel& b) {
  auto same = [](const auto& x, const auto& y) {
    return x.rows() == y.rows() && x.cols() == y.cols() && x == y;
  };
  return same(a.w1, b.w1) && same(a.b1, b.b1) && same(a.w2, b.w2) &&
         same(a.b2, b.b2);
}

ForwardResult Forward(const MlpModel& model, const Eigen::VectorXd& x) {
  CheckInput(model, x);
  ForwardResult r;
  if (model.hidden_dim() > 0) {
    r.hidden = (model.w1 * x + model.b1).cwiseMax(0.0);
    r.logits = model.w2 * r.hidden + model.b2;
  } else {
    r.logits = model.w2 * x + model.b2;
  }
  r.probs = Softmax(r.logits);
  return r;
}

Eigen::VectorXd SemanticEmbedding(const MlpModel& model,
                                  const Eigen::VectorXd& x,
                                  EmbeddingMode mode) {
  ForwardResult r = Forward(model, x);
  if (mode == EmbeddingMode::kHidden) {
    if (model.hidden_dim() == 0) {
      throw InvalidArgument("model has no hidden layer to embed with");
    }
    return r.hidden;
  }
  return r.logits;
}

double CrossEntropy(const MlpModel& model, const Eigen::VectorXd& x,
                    int label) {
  CheckLabel(model, label);
  const ForwardResult r = Forward(model, x);
  return LogSumExp(r.logits) - r.logits[label];
}

MlpModel CrossEntropyGradient(const MlpModel& model, const Eigen::VectorXd& x,
                              int label) {
  CheckLabel(model, label);
  const ForwardResult r = Forward(model, x);
  Eigen::VectorXd delta = r.probs;
  delta[label] -= 1.0;

  MlpModel g = MlpModel::Zeros(model.input_dim(), model.hidden_dim(),
                               model.num_classes());
  g.b2 = delta;
  if (model.hidden_dim() == 0) {
    g.w2 = delta * x.transpose();
    return g;
  }
  g.w2 = delta * r.hidden.transpose();
  Eigen::VectorXd back = model.w2.transpose() * delta;
  for (Eigen::Index j = 0; j < back.size(); ++j) {
    if (r.hidden[j] <= 0.0) back[j] = 0.0;
  }
  g.b1 = back;
  g.w1 = back * x.transpose();
  return g;
}

double GradCheck(const MlpModel& model, const Eigen::VectorXd& x, int label,
                 double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1e-2)) {
    throw InvalidArgument("grad check epsilon must lie in (0, 1e-2]");
  }
  const MlpModel analytic = CrossEntropyGradient(model, x, label);
  MlpModel probe = model;
  std::vector<double*> params;
  std::vector<double> grads;
  ForEachBlock(probe, [&](auto& block) {
    for (Eigen::Index i = 0; i < block.size(); ++i) {
      params.push_back(block.data() + i);
    }
  });
  ForEachBlock(analytic, [&](const auto& block) {
    for (Eigen::Index i = 0; i < block.size(); ++i) {
      grads.push_back(block.data()[i]);
    }
  });

  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    double* p = params[i];
    const double saved = *p;
    *p = saved + epsilon;
    const double up = CrossEntropy(probe, x, label);
    *p = saved - epsilon;
    const double down = CrossEntropy(probe, x, label);
    *p = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    const double err = std::abs(grads[i] - numeric) /
                       std::max(1e-12, std::abs(grads[i]) + std::abs(numeric));
    worst = std::max(worst, err);
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Training

namespace {

struct BatchForward {
  Eigen::MatrixXd hidden;  // batch x hidden
  Eigen::MatrixXd logits;  // batch x classes
};

BatchForward ForwardBatch(const MlpModel& m, const Eigen::MatrixXd& x) {
  BatchForward f;
  if (m.hidden_dim() > 0) {
    f.hidden = ((x * m.w1.transpose()).rowwise() + m.b1.transpose())
                   .cwiseMax(0.0);
    f.logits = (f.hidden * m.w2.transpose()).rowwise() + m.b2.transpose();
  } else {
    f.logits = (x * m.w2.transpose()).rowwise() + m.b2.transpose();
  }
  return f;
}

// Row-wise softmax in place; returns the summed cross-entropy of the rows.
double SoftmaxRowsWithLoss(Eigen::MatrixXd& logits,
                           const std::vector<int>& labels,
                           const std::vector<std::size_t>& rows) {
  double loss = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double shift = logits.row(r).maxCoeff();
    logits.row(r).array() = (logits.row(r).array() - shift).exp();
    const double z = logits.row(r).sum();
    const int y = labels[rows[static_cast<std::size_t>(r)]];
    loss += std::log(z) - std::log(logits(r, y));
    logits.row(r) /= z;
  }
  return loss;
}

Eigen::MatrixXd GatherRows(const Eigen::MatrixXd& samples,
                           const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), samples.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) =
        samples.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

void CheckSamples(const Eigen::MatrixXd& samples,
                  const std::vector<int>& labels, int num_classes,
                  const char* split) {
  if (samples.rows() == 0) {
    throw TrainingError(std::string(split) + " split is empty");
  }
  if (static_cast<std::size_t>(samples.rows()) != labels.size()) {
    throw DimensionError(std::string(split) +
                         ": sample and label counts differ");
  }
  for (int y : labels) {
    if (y < 0 || y >= num_classes) {
      throw BoundsError(std::string(split) + ": label " + std::to_string(y) +
                        " out of range [0, " + std::to_string(num_classes) +
                        ")");
    }
  }
  if (!samples.allFinite()) {
    throw TrainingError(std::string(split) + ": samples are not finite");
  }
}

}  // namespace

double MeanCrossEntropy(const MlpModel& model, const Eigen::MatrixXd& samples,
                        const std::vector<int>& labels) {
  if (samples.rows() == 0) return 0.0;
  constexpr Eigen::Index kChunk = 1024;
  double total = 0.0;
  for (Eigen::Index start = 0; start < samples.rows(); start += kChunk) {
    const Eigen::Index n = std::min(kChunk, samples.rows() - start);
    std::vector<std::size_t> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), static_cast<std::size_t>(start));
    BatchForward f = ForwardBatch(model, samples.middleRows(start, n));
    total += SoftmaxRowsWithLoss(f.logits, labels, rows);
  }
  return total / static_cast<double>(samples.rows());
}

TrainResult TrainMlp(const Eigen::MatrixXd& samples,
                     const std::vector<int>& labels,
                     const Eigen::MatrixXd& val_samples,
                     const std::vector<int>& val_labels, int num_classes,
                     const TrainConfig& config) {
  if (config.epochs <= 0 || config.batch_size <= 0 ||
      !(config.learning_rate > 0.0) || config.hidden < 0) {
    throw InvalidArgument("invalid training configuration");
  }
  CheckSamples(samples, labels, num_classes, "training");
  CheckSamples(val_samples, val_labels, num_classes, "validation");
  if (val_samples.cols() != samples.cols()) {
    throw DimensionError("training and validation widths differ");
  }

  TrainResult result;
  MlpModel model =
      MlpModel::GlorotUniform(samples.cols(), config.hidden, num_classes,
                              HashCombine(config.seed, 1));
  Rng order_rng(HashCombine(config.seed, 2));
  std::vector<std::size_t> order(static_cast<std::size_t>(samples.rows()));
  std::iota(order.begin(), order.end(), 0);

  MlpModel best = model;
  double best_val = std::numeric_limits<double>::infinity();
  const std::size_t batch = static_cast<std::size_t>(config.batch_size);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    order_rng.Shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      std::vector<std::size_t> rows(order.begin() + start, order.begin() + end);
      const Eigen::MatrixXd x = GatherRows(samples, rows);
      BatchForward f = ForwardBatch(model, x);
      SoftmaxRowsWithLoss(f.logits, labels, rows);
      Eigen::MatrixXd delta = std::move(f.logits);  // now probabilities
      for (std::size_t i = 0; i < rows.size(); ++i) {
        delta(static_cast<Eigen::Index>(i), labels[rows[i]]) -= 1.0;
      }
      const double scale =
          config.learning_rate / static_cast<double>(rows.size());
      if (model.hidden_dim() > 0) {
        Eigen::MatrixXd back =
            (delta * model.w2).cwiseProduct(
                (f.hidden.array() > 0.0).cast<double>().matrix());
        model.w2.noalias() -= scale * delta.transpose() * f.hidden;
        model.b2 -= scale * delta.colwise().sum().transpose();
        model.w1.noalias() -= scale * back.transpose() * x;
        model.b1 -= scale * back.colwise().sum().transpose();
      } else {
        model.w2.noalias() -= scale * delta.transpose() * x;
        model.b2 -= scale * delta.colwise().sum().transpose();
      }
    }

    const double train_loss = MeanCrossEntropy(model, samples, labels);
    const double val_loss = MeanCrossEntropy(model, val_samples, val_labels);
    if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) {
      throw TrainingError("loss became non-finite at epoch " +
                          std::to_string(epoch) +
                          "; the learning rate is probably too large");
    }
    result.train_loss.push_back(train_loss);
    result.val_loss.push_back(val_loss);
    if (val_loss < best_val) {
      best_val = val_loss;
      best = model;
      result.best_epoch = epoch;
    }
    if (config.log_progress) {
      std::clog << "epoch " << epoch << " train_loss " << train_loss
                << " val_loss " << val_loss << "\n";
    }
  }
  result.model = config.early_stopping ? std::move(best) : std::move(model);
  return result;
}

// ---------------------------------------------------------------------------
// Checkpoints

void WriteMlpCheckpoint(const MlpModel& model, std::ostream& out) {
  model.Validate();
  binio::WriteMagic(out, kMagic);
  binio::WriteU32(out, static_cast<std::uint32_t>(model.hidden_dim()));
  binio::WriteU32(out, static_cast<std::uint32_t>(model.num_classes()));
  ForEachBlock(model, [&](const auto& block) {
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index c = 0; c < block.cols(); ++c) {
        binio::WriteF64(out, block(r, c));
      }
    }
  });
}

MlpModel ReadMlpCheckpoint(std::istream& in) {
  binio::Reader reader(in, "SPJ1 checkpoint");
  reader.ExpectMagic(kMagic);
  const std::uint32_t hidden = reader.ReadU32("hidden width");
  const std::uint32_t classes = reader.ReadU32("class count");
  if (classes == 0) reader.Fail("class count must be positive");

  std::string payload(std::istreambuf_iterator<char>(in), {});
  if (payload.size() % 8 != 0) {
    reader.Fail("payload length " + std::to_string(payload.size()) +
                " is not a multiple of 8");
  }
  const std::uint64_t values = payload.size() / 8;
  const std::uint64_t h = hidden, p = classes;
  std::uint64_t input = 0;
  if (h > 0) {
    const std::uint64_t fixed = h + p * h + p;
    if (values <= fixed || (values - fixed) % h != 0) {
      reader.Fail("payload length does not match hidden/class dimensions");
    }
    input = (values - fixed) / h;
  } else {
    if (values <= p || (values - p) % p != 0) {
      reader.Fail("payload length does not match class dimension");
    }
    input = (values - p) / p;
  }

  MlpModel m = MlpModel::Zeros(static_cast<Eigen::Index>(input),
                               static_cast<Eigen::Index>(h),
                               static_cast<Eigen::Index>(p));
  std::istringstream body(payload);
  binio::Reader block_reader(body, "SPJ1 checkpoint payload");
  ForEachBlock(m, [&](auto& block) {
    for (Eigen::Index r = 0; r < block.rows(); ++r) {
      for (Eigen::Index c = 0; c < block.cols(); ++c) {
        block(r, c) = block_reader.ReadF64("parameter");
      }
    }
  });
  m.Validate();
  return m;
}

void SaveMlpCheckpoint(const MlpModel& model,
                       const std::filesystem::path& path) {
  WriteFileAtomically(
      path, [&](std::ostream& out) { WriteMlpCheckpoint(model, out); }, true);
}

MlpModel LoadMlpCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  try {
    return ReadMlpCheckpoint(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string LossCurvesToCsv(const TrainResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,train_loss,val_loss\n";
  for (std::size_t i = 0; i < result.train_loss.size(); ++i) {
    out << (i + 1) << ',' << result.train_loss[i] << ',' << result.val_loss[i]
        << '\n';
  }
  return out.str();
}

}  // namespace relgraph
