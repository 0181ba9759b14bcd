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

#include "relgraph/metrics.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "relgraph/errors.h"

namespace relgraph {

double PredicateAccuracy(const std::vector<int>& predictions,
                         const std::vector<int>& gold) {
  if (predictions.empty()) throw InvalidArgument("accuracy of zero samples");
  if (predictions.size() != gold.size()) {
    throw InvalidArgument("prediction and gold lengths differ");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (predictions[i] == gold[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double RecallAtK(const std::vector<std::vector<int>>& ranked,
                 const std::vector<int>& gold, int k) {
  if (ranked.empty()) throw InvalidArgument("recall of zero samples");
  if (ranked.size() != gold.size()) {
    throw InvalidArgument("prediction and gold lengths differ");
  }
  if (k < 1) throw InvalidArgument("k must be at least 1");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (ranked[i].size() < static_cast<std::size_t>(k)) {
      throw InvalidArgument("ranked list " + std::to_string(i) +
                            " is shorter than k = " + std::to_string(k));
    }
    if (std::find(ranked[i].begin(), ranked[i].begin() + k, gold[i]) !=
        ranked[i].begin() + k) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double AveragePrecision(const std::vector<bool>& is_true_positive,
                        std::size_t num_gold) {
  if (num_gold == 0) return 0.0;
  const std::size_t n = is_true_positive.size();
  std::vector<double> recall(n), precision(n);
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (is_true_positive[i]) ++tp;
    recall[i] = static_cast<double>(tp) / static_cast<double>(num_gold);
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
  }
  // Envelope: precision at recall r is the best precision at any recall >= r.
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (recall[i] > prev_recall) {
      ap += (recall[i] - prev_recall) * precision[i];
      prev_recall = recall[i];
    }
  }
  return ap;
}

MapResult MeanAveragePrecision(const std::vector<ImageDetections>& detections,
                               const std::vector<ImageGold>& gold,
                               double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold < 1.0)) {
    throw InvalidArgument("IoU threshold must lie in (0, 1)");
  }
  MapResult result;
  std::unordered_map<std::string, const ImageGold*> gold_by_image;
  std::set<int> categories;
  for (const ImageGold& g : gold) {
    gold_by_image[g.image_id] = &g;
    for (const GoldBox& b : g.boxes) categories.insert(b.category);
  }
  if (categories.empty()) {
    result.empty_input = true;
    return result;
  }

  struct Candidate {
    const std::string* image;
    const Detection* det;
  };

  double total = 0.0;
  for (int category : categories) {
    std::size_t num_gold = 0;
    for (const ImageGold& g : gold) {
      for (const GoldBox& b : g.boxes) num_gold += b.category == category;
    }
    std::vector<Candidate> cands;
    for (const ImageDetections& img : detections) {
      for (const Detection& d : img.detections) {
        if (d.category != category) continue;
        if (!std::isfinite(d.score)) {
          throw InvalidArgument("detection score is not finite");
        }
        cands.push_back({&img.image_id, &d});
      }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& a, const Candidate& b) {
                       return a.det->score > b.det->score;
                     });

    std::unordered_map<const GoldBox*, bool> matched;
    std::vector<bool> tp;
    tp.reserve(cands.size());
    for (const Candidate& c : cands) {
      bool hit = false;
      auto it = gold_by_image.find(*c.image);
      if (it != gold_by_image.end()) {
        const GoldBox* best = nullptr;
        double best_iou = -1.0;
        for (const GoldBox& b : it->second->boxes) {
          if (b.category != category) continue;
          const double iou = Iou(c.det->bbox, b.bbox);
          if (iou > best_iou) {
            best_iou = iou;
            best = &b;
          }
        }
        if (best && best_iou >= iou_threshold && !matched[best]) {
          matched[best] = true;
          hit = true;
        }
      }
      tp.push_back(hit);
    }
    const double ap = AveragePrecision(tp, num_gold);
    result.per_category[category] = ap;
    total += ap;
  }
  result.mean_ap = total / static_cast<double>(categories.size());
  return result;
}

}  // namespace relgraph
