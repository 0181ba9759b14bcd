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

#ifndef RELGRAPH_TESTS_MAP_FIXTURE_H_
#define RELGRAPH_TESTS_MAP_FIXTURE_H_

#include <vector>

#include "relgraph/metrics.h"

namespace relgraph::testing {

// Three images, four gold categories.
//
// Category 0 (3 gold): detections in score order are TP, FP, TP, FP
// (duplicate), TP. Precision 1, 1/2, 2/3, 1/2, 3/5 at recall 1/3, 1/3, 2/3,
// 2/3, 1. Envelope at the recall steps: 1, 2/3, 3/5, so
// AP = (1 + 2/3 + 3/5) / 3 = 34/45.
//
// Category 1 (2 gold): TP (IoU exactly 0.5), FP, TP. AP = 1/2 + 1/2 * 2/3
// = 5/6.
//
// Category 2 has detections only and is excluded. Category 3 has gold only:
// AP = 0.
//
// mAP = (34/45 + 5/6 + 0) / 3 = 143/270.
struct MapFixture {
  std::vector<ImageDetections> detections;
  std::vector<ImageGold> gold;
  static constexpr double kAp0 = 34.0 / 45.0;
  static constexpr double kAp1 = 5.0 / 6.0;
  static constexpr double kMap = 143.0 / 270.0;
};

inline MapFixture ThreeImageMapFixture() {
  using B = BoundingBox;
  MapFixture f;
  f.gold = {
      {"img1", {{B(0, 0, 10, 10), 0}, {B(5, 5, 9, 9), 1}}},
      {"img2", {{B(0, 0, 10, 10), 0}, {B(40, 40, 50, 50), 3}}},
      {"img3", {{B(20, 20, 30, 30), 0}, {B(0, 0, 4, 4), 1}}},
  };
  f.detections = {
      {"img1",
       {{B(0, 0, 10, 10), 0, 0.9},
        {B(0, 0, 10, 10), 0, 0.6},
        {B(5, 5, 9, 9), 1, 0.3},
        {B(0, 0, 5, 5), 2, 0.8}}},
      {"img2",
       {{B(50, 50, 60, 60), 0, 0.8},
        {B(1, 0, 11, 10), 0, 0.7},
        {B(0, 0, 4, 4), 1, 0.4}}},
      {"img3", {{B(20, 20, 30, 30), 0, 0.5}, {B(0, 0, 4, 2), 1, 0.95}}},
  };
  return f;
}

}  // namespace relgraph::testing

#endif  // RELGRAPH_TESTS_MAP_FIXTURE_H_
