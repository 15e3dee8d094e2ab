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

#include "docgat/layout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "docgat/errors.hpp"
#include "docgat/log.hpp"
#include "docgat/ops.hpp"

namespace docgat {

NormalizedBox NormalizedBox::from_corners(int x0, int y0, int x2, int y2) {
  NormalizedBox b;
  b.x = {x0, x2, x2, x0};
  b.y = {y0, y0, y2, y2};
  b.w = std::max(0, x2 - x0);
  b.h = std::max(0, y2 - y0);
  return b;
}

NormalizedBox NormalizedBox::translated(int dx, int dy) const {
  NormalizedBox b = *this;
  for (auto& v : b.x) v += dx;
  for (auto& v : b.y) v += dy;
  return b;
}

namespace {

int discretize(double value, double extent) {
  const double scaled = std::round(value * static_cast<double>(kLayoutRange) / extent);
  return static_cast<int>(std::clamp(scaled, 0.0, static_cast<double>(kLayoutRange)));
}

}  // namespace

NormalizedBox normalize_box(const BoundingBox& box, double image_width, double image_height) {
  if (!(image_width > 0) || !(image_height > 0)) {
    throw std::invalid_argument("normalize_box: image size must be positive");
  }
  NormalizedBox out;
  for (std::size_t v = 0; v < 4; ++v) {
    out.x[v] = discretize(box.vertices[v].x, image_width);
    out.y[v] = discretize(box.vertices[v].y, image_height);
  }
  out.w = std::max(0, out.x[2] - out.x[0]);
  out.h = std::max(0, out.y[2] - out.y[0]);
  if (out.w == 0 || out.h == 0) {
    log::warn("normalize_box: box collapsed to zero area at (" + std::to_string(out.x[0]) + ", " +
              std::to_string(out.y[0]) + ")");
  }
  return out;
}

LayoutFeatures layout_features(const NormalizedBox& box) {
  return {box.x[0], box.y[0], box.x[2], box.y[2], box.w, box.h};
}

Tensor layout_embed(std::span<const NormalizedBox> boxes, const Tensor& x_table, const Tensor& y_table) {
  if (x_table.rows() != kLayoutTableRows || y_table.rows() != kLayoutTableRows) {
    throw ShapeError("layout_embed: tables must have 513 rows");
  }
  std::array<std::vector<std::size_t>, 6> columns;
  for (const auto& box : boxes) {
    const auto f = layout_features(box);
    for (std::size_t k = 0; k < 6; ++k) {
      if (f[k] < 0 || f[k] > kLayoutRange) {
        throw ShapeError("layout_embed: feature value " + std::to_string(f[k]) + " outside [0, 512]");
      }
      columns[k].push_back(static_cast<std::size_t>(f[k]));
    }
  }
  // features are (x0, y0, x2, y2, w, h); x-table takes 0, 2, 4, y-table 1, 3, 5
  return concat({embedding_lookup(x_table, columns[0]), embedding_lookup(x_table, columns[2]),
                 embedding_lookup(x_table, columns[4]), embedding_lookup(y_table, columns[1]),
                 embedding_lookup(y_table, columns[3]), embedding_lookup(y_table, columns[5])},
                1);
}

std::vector<double> sinusoidal_encode(int delta, std::size_t d_s) {
  if (d_s == 0 || d_s % 2 != 0) throw std::invalid_argument("sinusoidal_encode: d_s must be positive and even");
  std::vector<double> out(d_s);
  for (std::size_t t = 0; 2 * t < d_s; ++t) {
    const double angle =
        static_cast<double>(delta) / std::pow(10000.0, static_cast<double>(2 * t) / static_cast<double>(d_s));
    out[2 * t] = std::sin(angle);
    out[2 * t + 1] = std::cos(angle);
  }
  return out;
}

std::vector<double> corner_encoding(const NormalizedBox& a, const NormalizedBox& b, std::size_t corner,
                                    std::size_t d_s) {
  auto out = sinusoidal_encode(a.x[corner] - b.x[corner], d_s);
  auto ys = sinusoidal_encode(a.y[corner] - b.y[corner], d_s);
  out.insert(out.end(), ys.begin(), ys.end());
  return out;
}

PairPositionFeatures pair_position_features(std::span<const NormalizedBox> boxes, std::span<const std::size_t> rows,
                                            std::span<const std::size_t> cols, std::size_t d_s) {
  if (rows.size() != cols.size() || rows.empty()) {
    throw ShapeError("pair_position_features: need matching, nonempty pair lists");
  }
  const auto p = rows.size();
  const auto width = 2 * d_s;
  const NormalizedBox origin;
  PairPositionFeatures out;
  out.rows.assign(rows.begin(), rows.end());
  out.cols.assign(cols.begin(), cols.end());
  for (std::size_t v = 0; v < 4; ++v) {
    std::vector<double> data(p * width);
    for (std::size_t k = 0; k < p; ++k) {
      const bool global = rows[k] == 0 || cols[k] == 0;
      const auto enc = global ? corner_encoding(origin, origin, v, d_s)
                              : corner_encoding(boxes[rows[k]], boxes[cols[k]], v, d_s);
      std::copy(enc.begin(), enc.end(), data.begin() + static_cast<std::ptrdiff_t>(k * width));
    }
    out.corners[v] = Tensor::from_data({p, width}, std::move(data));
  }
  return out;
}

Tensor relative_position_bias(const PairPositionFeatures& features, const std::array<Tensor, 4>& weights) {
  Tensor total = matmul(features.corners[0], weights[0]);
  for (std::size_t v = 1; v < 4; ++v) total = add(total, matmul(features.corners[v], weights[v]));
  return total;
}

std::vector<double> relative_position_bias(const NormalizedBox& a, const NormalizedBox& b,
                                           const std::array<Tensor, 4>& weights) {
  const auto d_s = weights[0].rows() / 2;
  std::array<Tensor, 4> corners;
  for (std::size_t v = 0; v < 4; ++v) {
    corners[v] = Tensor::from_data({1, 2 * d_s}, corner_encoding(a, b, v, d_s));
  }
  NoGradGuard no_grad;
  Tensor bb = matmul(corners[0], weights[0]);
  for (std::size_t v = 1; v < 4; ++v) bb = add(bb, matmul(corners[v], weights[v]));
  return {bb.data().begin(), bb.data().end()};
}

}  // namespace docgat
