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
#include <cstddef>
#include <span>
#include <vector>

#include "docgat/document.hpp"
#include "docgat/tensor.hpp"

namespace docgat {

inline constexpr int kLayoutRange = 512;
inline constexpr std::size_t kLayoutTableRows = kLayoutRange + 1;

/// Box with every coordinate discretized to [0, 512].
struct NormalizedBox {
  std::array<int, 4> x{};
  std::array<int, 4> y{};
  int w = 0;
  int h = 0;

  static NormalizedBox from_corners(int x0, int y0, int x2, int y2);
  // The whole page, used for the global node.
  static NormalizedBox full_page() { return from_corners(0, 0, kLayoutRange, kLayoutRange); }

  NormalizedBox translated(int dx, int dy) const;

  friend bool operator==(const NormalizedBox&, const NormalizedBox&) = default;
};

/// Maps each coordinate to clamp(round(c * 512 / extent), 0, 512) with
/// round-half-away-from-zero, then recomputes w and h from corners 0 and 2.
/// A box that collapses to zero area is kept and logged as a warning.
NormalizedBox normalize_box(const BoundingBox& box, double image_width, double image_height);

/// (x0, y0, x2, y2, w, h)
using LayoutFeatures = std::array<int, 6>;
LayoutFeatures layout_features(const NormalizedBox& box);

/// Layout embedding rows for `boxes`: [Ex(x0); Ex(x2); Ex(w); Ey(y0); Ey(y2); Ey(h)]
/// where both tables are [513 x d/6]. Output is [boxes.size() x d].
Tensor layout_embed(std::span<const NormalizedBox> boxes, const Tensor& x_table, const Tensor& y_table);

/// Component 2t = sin(delta / 10000^(2t/d_s)), component 2t+1 the cosine.
std::vector<double> sinusoidal_encode(int delta, std::size_t d_s);

/// p^v = [f(x_iv - x_jv); f(y_iv - y_jv)] for one corner v, of length 2 * d_s.
std::vector<double> corner_encoding(const NormalizedBox& a, const NormalizedBox& b, std::size_t corner,
                                    std::size_t d_s);

/// Constant relative-position encodings for a list of ordered node pairs.
/// corners[v] is [P x 2*d_s]; row p encodes pair (rows[p], cols[p]).
struct PairPositionFeatures {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::array<Tensor, 4> corners;
};

/// Builds encodings for each pair (rows[p], cols[p]) over `boxes` (index 0
/// is the global node). Pairs that involve the global node use zero offsets:
/// the global node has no position of its own relative to a region.
PairPositionFeatures pair_position_features(std::span<const NormalizedBox> boxes,
                                            std::span<const std::size_t> rows,
                                            std::span<const std::size_t> cols, std::size_t d_s);

/// bb = sum over corners v of p^v * W^v, each W^v a [2*d_s x d] tensor.
/// Returns [P x d].
Tensor relative_position_bias(const PairPositionFeatures& features, const std::array<Tensor, 4>& weights);

/// Single-pair form of the above.
std::vector<double> relative_position_bias(const NormalizedBox& a, const NormalizedBox& b,
                                           const std::array<Tensor, 4>& weights);

}  // namespace docgat
