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

#include <algorithm>
#include <numeric>
#include <random>

#include "docgat/errors.hpp"
#include "docgat/graph.hpp"

namespace docgat {
namespace {

// Exhaustive oracle: sort every node by (squared distance, index).
NeighborSets brute_force(const std::vector<Center>& c, std::size_t k) {
  NeighborSets out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t j = 0; j < c.size(); ++j) {
      const double dx = c[i].x - c[j].x, dy = c[i].y - c[j].y;
      all.emplace_back(j == i ? -1.0 : dx * dx + dy * dy, j + 1);
    }
    std::sort(all.begin(), all.end());
    std::vector<std::size_t> n;
    for (std::size_t t = 0; t < std::min(k, c.size()); ++t) n.push_back(all[t].second);
    out.push_back(n);
  }
  return out;
}

TEST(BoxCenter, Midpoints) {
  const auto a = box_center(NormalizedBox::full_page());
  EXPECT_EQ(a.x, 256.0);
  EXPECT_EQ(a.y, 256.0);
  const auto b = box_center(NormalizedBox::from_corners(10, 20, 30, 60));
  EXPECT_EQ(b.x, 20.0);
  EXPECT_EQ(b.y, 40.0);
  const auto p = box_center(NormalizedBox::from_corners(7, 9, 7, 9));
  EXPECT_EQ(p.x, 7.0);
  EXPECT_EQ(p.y, 9.0);
}

TEST(Knn, SmallCases) {
  const std::vector<Center> three{{0, 0}, {5, 0}, {1, 1}};
  for (const auto& n : knn_neighbors(three, 5)) EXPECT_EQ(n.size(), 3u);
  EXPECT_EQ(knn_neighbors(three, 5)[1], (std::vector<std::size_t>{2, 3, 1}));

  const std::vector<Center> line{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {10, 0}};
  EXPECT_EQ(knn_neighbors(line, 2)[4], (std::vector<std::size_t>{5, 4}));
  // Node 2 is equidistant from 1 and 3; the lower index wins.
  EXPECT_EQ(knn_neighbors(line, 2)[1], (std::vector<std::size_t>{2, 1}));
}

TEST(Knn, Errors) {
  EXPECT_THROW(knn_neighbors(std::vector<Center>{}, 3), DataError);
  EXPECT_THROW(knn_neighbors(std::vector<Center>{{0, 0}}, 0), ConfigError);
}

TEST(Knn, MatchesBruteForceOnRandomAndGridCenters) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 50;
    const bool grid = trial % 2 == 0;
    std::uniform_real_distribution<double> u(0.0, 512.0);
    std::uniform_int_distribution<int> g(0, 4);
    std::vector<Center> c(n);
    for (auto& p : c) p = grid ? Center{g(rng) * 16.0, g(rng) * 16.0} : Center{u(rng), u(rng)};
    const std::size_t k = 1 + rng() % (n + 2);
    EXPECT_EQ(knn_neighbors(c, k), brute_force(c, k)) << "n=" << n << " k=" << k;
  }
}

TEST(AttentionMask, StructuralInvariants) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> c(0, 500);
  std::vector<NormalizedBox> boxes;
  for (int i = 0; i < 6; ++i) {
    const int x = c(rng), y = c(rng);
    boxes.push_back(NormalizedBox::from_corners(x, y, x + 10, y + 5));
  }
  const auto g = build_document_graph(boxes, 3);
  ASSERT_EQ(g.node_count, 7u);
  for (std::size_t i = 0; i < 7; ++i) {
    EXPECT_TRUE(g.mask(i, 0));
    EXPECT_TRUE(g.mask(0, i));
    EXPECT_TRUE(g.mask(i, i));
    if (i > 0) {
      EXPECT_EQ(g.mask.row_count(i), 4u);
    }
  }
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < 7; ++i) pairs += g.mask.row_count(i);
  EXPECT_EQ(g.pair_count(), pairs);
  for (std::size_t p = 0; p < g.pair_count(); ++p) EXPECT_TRUE(g.mask(g.pair_rows[p], g.pair_cols[p]));
  EXPECT_TRUE(std::is_sorted(g.pair_rows.begin(), g.pair_rows.end()));
}

TEST(AttentionMask, DenseWhenKCoversAllNodes) {
  const std::vector<NormalizedBox> one{NormalizedBox::from_corners(1, 1, 2, 2)};
  EXPECT_TRUE(build_document_graph(one, 1).mask.all());
  EXPECT_EQ(build_document_graph(one, 1).mask.rows(), 2u);
  std::vector<NormalizedBox> four;
  for (int i = 0; i < 4; ++i) four.push_back(NormalizedBox::from_corners(i * 100, 0, i * 100 + 50, 20));
  EXPECT_TRUE(build_document_graph(four, 4).mask.all());
  EXPECT_FALSE(build_document_graph(four, 2).mask.all());
}

TEST(AttentionMask, PermutingNodesPermutesTheMask) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 512.0);
  std::vector<Center> c(12);
  for (auto& p : c) p = {u(rng), u(rng)};
  std::vector<std::size_t> perm(12);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Center> pc(12);
  for (std::size_t i = 0; i < 12; ++i) pc[i] = c[perm[i]];
  const auto a = build_attention_mask(knn_neighbors(c, 4), 12, 4);
  const auto b = build_attention_mask(knn_neighbors(pc, 4), 12, 4);
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) EXPECT_EQ(b.mask(i + 1, j + 1), a.mask(perm[i] + 1, perm[j] + 1));
}

TEST(GraphFromMask, DerivesNeighborsFromRows) {
  BoolMatrix m(3, 3, true);
  m.set(1, 2, false);
  const auto g = graph_from_mask(m);
  EXPECT_EQ(g.neighbors[0], (std::vector<std::size_t>{1}));
  EXPECT_EQ(g.pair_count(), 8u);
}

}  // namespace
}  // namespace docgat
