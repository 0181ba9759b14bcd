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

#ifndef RELGRAPH_GEOMETRY_H_
#define RELGRAPH_GEOMETRY_H_

#include <string>

namespace relgraph {

// Axis-aligned rectangle in pixel coordinates, origin at the top-left corner.
// Zero width or height is allowed. Construction validates ordering and
// finiteness, so every BoundingBox in circulation is valid.
class BoundingBox {
 public:
  // Unit box at the origin with zero extent.
  BoundingBox() = default;

  // Throws InvalidArgument when a coordinate is not finite or when
  // x_min > x_max or y_min > y_max.
  BoundingBox(double x_min, double y_min, double x_max, double y_max);

  double x_min() const { return x_min_; }
  double y_min() const { return y_min_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }
  double width() const { return x_max_ - x_min_; }
  double height() const { return y_max_ - y_min_; }

  bool Contains(const BoundingBox& other) const;

  std::string ToString() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;

 private:
  double x_min_ = 0.0;
  double y_min_ = 0.0;
  double x_max_ = 0.0;
  double y_max_ = 0.0;
};

double Area(const BoundingBox& b);

// Area of the overlap; 0 for disjoint or edge-touching boxes.
double IntersectionArea(const BoundingBox& a, const BoundingBox& b);

// Intersection over union in [0, 1]. Defined as 0 when the union is empty.
double Iou(const BoundingBox& a, const BoundingBox& b);

// Smallest box containing both inputs. This is the region a relationship
// occupies in the image (the "predicate box").
BoundingBox EnclosingBox(const BoundingBox& a, const BoundingBox& b);

}  // namespace relgraph

#endif  // RELGRAPH_GEOMETRY_H_
