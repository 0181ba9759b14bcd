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

#ifndef RELGRAPH_METRICS_H_
#define RELGRAPH_METRICS_H_

#include <map>
#include <string>
#include <vector>

#include "relgraph/geometry.h"

namespace relgraph {

// Fraction of positions where prediction == gold. Throws InvalidArgument for
// empty or unequal-length inputs.
double PredicateAccuracy(const std::vector<int>& predictions,
                         const std::vector<int>& gold);

// Fraction of samples whose gold id is among the first k entries of its
// ranked list. Throws InvalidArgument when a list is shorter than k.
double RecallAtK(const std::vector<std::vector<int>>& ranked,
                 const std::vector<int>& gold, int k);

struct Detection {
  BoundingBox bbox;
  int category = 0;
  double score = 0.0;
};

struct GoldBox {
  BoundingBox bbox;
  int category = 0;
};

struct ImageDetections {
  std::string image_id;
  std::vector<Detection> detections;
};

struct ImageGold {
  std::string image_id;
  std::vector<GoldBox> boxes;
};

struct MapResult {
  double mean_ap = 0.0;
  std::map<int, double> per_category;  // categories present in gold
  bool empty_input = false;            // no gold boxes at all
};

// VOC-style mAP. Detections of a category are visited in descending score
// order (stable for equal scores). Each one finds the gold box of the same
// image and category with the highest IoU; it is a true positive when that
// IoU >= threshold and the box is not yet claimed, else a false positive. AP uses all-point interpolation
// of the precision envelope. The mean runs over categories present in gold.
MapResult MeanAveragePrecision(const std::vector<ImageDetections>& detections,
                               const std::vector<ImageGold>& gold,
                               double iou_threshold = 0.5);

// Area under the monotone precision envelope for one ranked detection list.
// `is_true_positive` is in score order; `num_gold` is the recall denominator.
double AveragePrecision(const std::vector<bool>& is_true_positive,
                        std::size_t num_gold);

}  // namespace relgraph

#endif  // RELGRAPH_METRICS_H_
