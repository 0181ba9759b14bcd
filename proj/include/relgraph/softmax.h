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

#ifndef RELGRAPH_SOFTMAX_H_
#define RELGRAPH_SOFTMAX_H_

#include <Eigen/Dense>

namespace relgraph {

// Max-shifted softmax; exact shift invariance up to rounding.
Eigen::VectorXd Softmax(const Eigen::VectorXd& logits);

// log(sum(exp(logits))) computed with the same shift.
double LogSumExp(const Eigen::VectorXd& logits);

// Index of the largest entry; the lowest index wins ties.
Eigen::Index ArgMax(const Eigen::VectorXd& v);

}  // namespace relgraph

#endif  // RELGRAPH_SOFTMAX_H_
