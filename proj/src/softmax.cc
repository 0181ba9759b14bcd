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

#include "relgraph/softmax.h"

#include <cmath>

#include "relgraph/errors.h"

namespace relgraph {

Eigen::VectorXd Softmax(const Eigen::VectorXd& logits) {
  if (logits.size() == 0) throw DimensionError("softmax of an empty vector");
  const double shift = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - shift).exp().matrix();
  return e / e.sum();
}

double LogSumExp(const Eigen::VectorXd& logits) {
  if (logits.size() == 0) throw DimensionError("logsumexp of an empty vector");
  const double shift = logits.maxCoeff();
  return shift + std::log((logits.array() - shift).exp().sum());
}

Eigen::Index ArgMax(const Eigen::VectorXd& v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace relgraph
