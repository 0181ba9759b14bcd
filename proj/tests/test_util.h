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

#ifndef RELGRAPH_TESTS_TEST_UTIL_H_
#define RELGRAPH_TESTS_TEST_UTIL_H_

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unistd.h>

#include "relgraph/rng.h"

namespace relgraph::testing {

inline std::filesystem::path DataPath(const std::string& relative) {
  return std::filesystem::path(RELGRAPH_TEST_DATA_DIR) / relative;
}

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("relgraph_test_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

struct Blobs {
  Eigen::MatrixXd x;
  std::vector<int> y;
};

// Three classes in 2D: unit discs centred at radius 3 on angles 90, 210 and
// 330 degrees. Discs are 3*sqrt(3) - 2 ~ 3.2 apart, so every pair of classes
// is separated with margin > 1.5.
inline Blobs SeparableBlobs(int n, std::uint64_t seed) {
  Rng rng(seed);
  Blobs b;
  b.x.resize(n, 2);
  const double kPi = 3.14159265358979323846;
  for (int i = 0; i < n; ++i) {
    const int c = i % 3;
    const double angle = (90.0 + 120.0 * c) * kPi / 180.0;
    double dx, dy;
    do {
      dx = rng.Uniform(-1.0, 1.0);
      dy = rng.Uniform(-1.0, 1.0);
    } while (dx * dx + dy * dy > 1.0);
    b.x(i, 0) = 3.0 * std::cos(angle) + dx;
    b.x(i, 1) = 3.0 * std::sin(angle) + dy;
    b.y.push_back(c);
  }
  return b;
}

// Smallest distance between two points with different labels.
inline double MinInterClassDistance(const Blobs& b) {
  double best = INFINITY;
  for (Eigen::Index i = 0; i < b.x.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < b.x.rows(); ++j) {
      if (b.y[i] == b.y[j]) continue;
      best = std::min(best, (b.x.row(i) - b.x.row(j)).norm());
    }
  }
  return best;
}

}  // namespace relgraph::testing

#endif  // RELGRAPH_TESTS_TEST_UTIL_H_
