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

#include "relgraph/geometry.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relgraph/errors.h"

namespace relgraph {

BoundingBox::BoundingBox(double x_min, double y_min, double x_max,
                         double y_max)
    : x_min_(x_min), y_min_(y_min), x_max_(x_max), y_max_(y_max) {
  if (!std::isfinite(x_min) || !std::isfinite(y_min) ||
      !std::isfinite(x_max) || !std::isfinite(y_max)) {
    throw InvalidArgument("bounding box has a non-finite coordinate");
  }
  if (x_min > x_max || y_min > y_max) {
    throw InvalidArgument("bounding box corners out of order: " + ToString());
  }
}

bool BoundingBox::Contains(const BoundingBox& other) const {
  return x_min_ <= other.x_min_ && y_min_ <= other.y_min_ &&
         x_max_ >= other.x_max_ && y_max_ >= other.y_max_;
}

std::string BoundingBox::ToString() const {
  std::ostringstream ss;
  ss << "(" << x_min_ << ", " << y_min_ << ", " << x_max_ << ", " << y_max_
     << ")";
  return ss.str();
}

double Area(const BoundingBox& b) { return b.width() * b.height(); }

double IntersectionArea(const BoundingBox& a, const BoundingBox& b) {
  const double w =
      std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double h =
      std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = IntersectionArea(a, b);
  const double uni = Area(a) + Area(b) - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

BoundingBox EnclosingBox(const BoundingBox& a, const BoundingBox& b) {
  return BoundingBox(std::min(a.x_min(), b.x_min()),
                     std::min(a.y_min(), b.y_min()),
                     std::max(a.x_max(), b.x_max()),
                     std::max(a.y_max(), b.y_max()));
}

}  // namespace relgraph
