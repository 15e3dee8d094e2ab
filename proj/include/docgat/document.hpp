// Copyright 2026 The docgat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace docgat {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Four vertices in image pixels, clockwise from the upper-left corner:
/// 0 = top-left, 1 = top-right, 2 = bottom-right, 3 = bottom-left.
struct BoundingBox {
  std::array<Point, 4> vertices{};

  static BoundingBox from_corners(double x0, double y0, double x2, double y2) {
    return BoundingBox{{Point{x0, y0}, Point{x2, y0}, Point{x2, y2}, Point{x0, y2}}};
  }

  double width() const { return vertices[2].x - vertices[0].x; }
  double height() const { return vertices[2].y - vertices[0].y; }

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct RegionRecord {
  std::string id;
  std::string text;
  BoundingBox box;
  std::optional<std::string> label;

  friend bool operator==(const RegionRecord&, const RegionRecord&) = default;
};

struct DocumentRecord {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<RegionRecord> regions;
  std::optional<std::string> doc_class;

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

}  // namespace docgat
