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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "docgat/layout.hpp"
#include "docgat/ops.hpp"
#include "helpers.hpp"

namespace docgat {
namespace {

using testing::random_tensor;

TEST(NormalizeBox, KnownValues) {
  const auto b = normalize_box(BoundingBox::from_corners(500, 0, 333, 1000), 1000, 1000);
  EXPECT_EQ(b.x[0], 256);
  EXPECT_EQ(b.x[2], 170);
  EXPECT_EQ(b.y[2], 512);

  const auto page = normalize_box(BoundingBox::from_corners(0, 0, 640, 480), 640, 480);
  EXPECT_EQ(page, NormalizedBox::full_page());
  EXPECT_EQ(page.w, 512);
  EXPECT_EQ(page.h, 512);
}

TEST(NormalizeBox, RoundsHalfAwayFromZeroAndClamps) {
  // 1 * 512 / 1024 = 0.5 rounds up; 3 * 512 / 1024 = 1.5 rounds to 2.
  const auto b = normalize_box(BoundingBox::from_corners(1, 3, 3, 5000), 1024, 1024);
  EXPECT_EQ(b.x[0], 1);
  EXPECT_EQ(b.y[0], 2);
  EXPECT_EQ(b.x[2], 2);
  EXPECT_EQ(b.y[2], 512);
  EXPECT_EQ(b.h, 510);
}

TEST(NormalizeBox, IdempotentOnA512Page) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(0, 512);
  for (int trial = 0; trial < 200; ++trial) {
    int x0 = c(rng), x2 = c(rng), y0 = c(rng), y2 = c(rng);
    if (x0 > x2) std::swap(x0, x2);
    if (y0 > y2) std::swap(y0, y2);
    const auto b = normalize_box(BoundingBox::from_corners(x0, y0, x2, y2), 512, 512);
    EXPECT_EQ(b, NormalizedBox::from_corners(x0, y0, x2, y2));
    for (int v = 0; v < 4; ++v) {
      EXPECT_GE(b.x[v], 0);
      EXPECT_LE(b.x[v], 512);
    }
  }
}

TEST(LayoutEmbed, ConcatenatesSixLookupsInOrder) {
  std::mt19937_64 rng(6);
  const auto xt = random_tensor({kLayoutTableRows, 2}, rng);
  const auto yt = random_tensor({kLayoutTableRows, 2}, rng);
  const std::vector<NormalizedBox> boxes{NormalizedBox::full_page(), NormalizedBox::from_corners(10, 20, 30, 60),
                                         NormalizedBox::from_corners(10, 20, 30, 60)};
  const auto l = layout_embed(boxes, xt, yt);
  ASSERT_EQ(l.rows(), 3u);
  ASSERT_EQ(l.cols(), 12u);
  const int expect_global[6] = {0, 512, 512, 0, 512, 512};
  const int expect_box[6] = {10, 30, 20, 20, 60, 40};
  for (int f = 0; f < 6; ++f) {
    const auto& table = f < 3 ? xt : yt;
    for (std::size_t c = 0; c < 2; ++c) {
      EXPECT_EQ(l.at(0, 2 * f + c), table.at(expect_global[f], c));
      EXPECT_EQ(l.at(1, 2 * f + c), table.at(expect_box[f], c));
      EXPECT_EQ(l.at(2, 2 * f + c), l.at(1, 2 * f + c));
    }
  }
  EXPECT_EQ(layout_features(boxes[1]), (LayoutFeatures{10, 20, 30, 60, 20, 40}));
}

TEST(Sinusoid, KnownValues) {
  const auto zero = sinusoidal_encode(0, 6);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(zero[i], i % 2 == 0 ? 0.0 : 1.0);
  const auto one = sinusoidal_encode(1, 4);
  EXPECT_NEAR(one[0], 0.8414709848, 1e-10);
  EXPECT_NEAR(one[1], 0.5403023059, 1e-10);
  const auto five = sinusoidal_encode(5, 8);
  EXPECT_NEAR(five[2], 0.479425538604203, 1e-14);
  EXPECT_NEAR(five[7], 0.9999875000260416, 1e-14);
  EXPECT_THROW(sinusoidal_encode(1, 3), std::invalid_argument);
}

// Direct evaluation of the four-corner sum with its own sinusoid.
std::vector<double> reference_bias(const NormalizedBox& a, const NormalizedBox& b, const std::array<Tensor, 4>& w,
                                   std::size_t ds) {
  const auto d = w[0].cols();
  std::vector<double> out(d, 0.0);
  for (std::size_t v = 0; v < 4; ++v) {
    std::vector<double> p;
    for (int delta : {a.x[v] - b.x[v], a.y[v] - b.y[v]}) {
      for (std::size_t k = 0; k < ds; ++k) {
        const double freq = std::exp(-std::log(10000.0) * static_cast<double>(k - k % 2) / static_cast<double>(ds));
        p.push_back(k % 2 == 0 ? std::sin(delta * freq) : std::cos(delta * freq));
      }
    }
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t r = 0; r < p.size(); ++r) out[c] += p[r] * w[v].at(r, c);
  }
  return out;
}

TEST(RelativePositionBias, MatchesReferenceAndBatchedForm) {
  std::mt19937_64 rng(7);
  const std::size_t d = 12, ds = d / 2;
  std::array<Tensor, 4> w;
  for (auto& t : w) t = random_tensor({2 * ds, d}, rng);
  std::uniform_int_distribution<int> c(0, 512);
  std::vector<NormalizedBox> boxes{NormalizedBox::full_page()};
  for (int i = 0; i < 5; ++i) {
    int x0 = c(rng), x2 = c(rng), y0 = c(rng), y2 = c(rng);
    if (x0 > x2) std::swap(x0, x2);
    if (y0 > y2) std::swap(y0, y2);
    boxes.push_back(NormalizedBox::from_corners(x0, y0, x2, y2));
  }
  std::vector<std::size_t> rows, cols;
  for (std::size_t i = 1; i < boxes.size(); ++i)
    for (std::size_t j = 1; j < boxes.size(); ++j) {
      rows.push_back(i);
      cols.push_back(j);
    }
  const auto batched = relative_position_bias(pair_position_features(boxes, rows, cols, ds), w);
  for (std::size_t p = 0; p < rows.size(); ++p) {
    const auto ref = reference_bias(boxes[rows[p]], boxes[cols[p]], w, ds);
    const auto single = relative_position_bias(boxes[rows[p]], boxes[cols[p]], w);
    for (std::size_t k = 0; k < d; ++k) {
      EXPECT_NEAR(batched.at(p, k), ref[k], 1e-12);
      EXPECT_EQ(batched.at(p, k), single[k]);
    }
  }
}

TEST(RelativePositionBias, SelfPairDependsOnlyOnParameters) {
  std::mt19937_64 rng(8);
  std::array<Tensor, 4> w;
  for (auto& t : w) t = random_tensor({8, 8}, rng);
  const auto a = relative_position_bias(NormalizedBox::from_corners(1, 2, 3, 4), NormalizedBox::from_corners(1, 2, 3, 4), w);
  const auto b = relative_position_bias(NormalizedBox::from_corners(100, 200, 300, 400),
                                        NormalizedBox::from_corners(100, 200, 300, 400), w);
  EXPECT_EQ(a, b);
}

TEST(RelativePositionBias, TranslationInvariant) {
  std::mt19937_64 rng(9);
  std::array<Tensor, 4> w;
  for (auto& t : w) t = random_tensor({8, 8}, rng);
  const auto a = NormalizedBox::from_corners(10, 40, 90, 60);
  const auto b = NormalizedBox::from_corners(200, 300, 260, 330);
  for (auto [dx, dy] : {std::pair{10, 10}, std::pair{-10, 0}, std::pair{200, 150}}) {
    EXPECT_EQ(relative_position_bias(a, b, w), relative_position_bias(a.translated(dx, dy), b.translated(dx, dy), w));
  }
}

TEST(RelativePositionBias, GlobalPairsUseZeroOffset) {
  const std::vector<NormalizedBox> boxes{NormalizedBox::full_page(), NormalizedBox::from_corners(5, 5, 50, 50)};
  const std::vector<std::size_t> rows{0, 1, 1}, cols{1, 0, 1};
  const auto f = pair_position_features(boxes, rows, cols, 4);
  for (std::size_t v = 0; v < 4; ++v)
    for (std::size_t p = 0; p < 3; ++p)
      for (std::size_t k = 0; k < 8; ++k) EXPECT_EQ(f.corners[v].at(p, k), k % 2 == 0 ? 0.0 : 1.0);
}

}  // namespace
}  // namespace docgat
