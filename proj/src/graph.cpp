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

#include "docgat/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "docgat/errors.hpp"

namespace docgat {

Center box_center(const NormalizedBox& box) {
  return {(box.x[0] + box.x[2]) / 2.0, (box.y[0] + box.y[2]) / 2.0};
}

NeighborSets knn_neighbors(std::span<const Center> centers, std::size_t k) {
  if (k < 1) throw ConfigError("knn_neighbors: k must be at least 1");
  const std::size_t n = centers.size();
  if (n == 0) throw DataError("knn_neighbors: empty document");

  NeighborSets out(n);
  const std::size_t take = std::min(k, n) - 1;  // excluding self
  std::vector<std::pair<double, std::size_t>> others;
  others.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = centers[i].x - centers[j].x;
      const double dy = centers[i].y - centers[j].y;
      others.emplace_back(dx * dx + dy * dy, j);
    }
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(take), others.end());
    auto& nbrs = out[i];
    nbrs.reserve(take + 1);
    nbrs.push_back(i + 1);
    for (std::size_t t = 0; t < take; ++t) nbrs.push_back(others[t].second + 1);
  }
  return out;
}

namespace {

void collect_pairs(AttentionGraph& g) {
  g.pair_rows.clear();
  g.pair_cols.clear();
  for (std::size_t i = 0; i < g.node_count; ++i)
    for (std::size_t j = 0; j < g.node_count; ++j)
      if (g.mask(i, j)) {
        g.pair_rows.push_back(i);
        g.pair_cols.push_back(j);
      }
}

}  // namespace

AttentionGraph build_attention_mask(const NeighborSets& neighbors, std::size_t n, std::size_t k) {
  if (neighbors.size() != n) {
    throw std::invalid_argument("build_attention_mask: " + std::to_string(neighbors.size()) +
                                " neighbor sets for " + std::to_string(n) + " nodes");
  }
  AttentionGraph g;
  g.node_count = n + 1;
  g.k = k;
  g.neighbors = neighbors;
  g.mask = BoolMatrix(n + 1, n + 1, false);
  for (std::size_t j = 0; j <= n; ++j) g.mask.set(0, j, true);
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& nbrs = neighbors[i - 1];
    if (std::find(nbrs.begin(), nbrs.end(), i) == nbrs.end()) {
      throw std::invalid_argument("build_attention_mask: N(" + std::to_string(i) + ") excludes the node itself");
    }
    g.mask.set(i, 0, true);
    for (auto j : nbrs) {
      if (j < 1 || j > n) throw std::invalid_argument("build_attention_mask: neighbor index out of range");
      g.mask.set(i, j, true);
    }
  }
  collect_pairs(g);
  return g;
}

AttentionGraph build_document_graph(std::span<const NormalizedBox> region_boxes, std::size_t k) {
  std::vector<Center> centers;
  centers.reserve(region_boxes.size());
  for (const auto& b : region_boxes) centers.push_back(box_center(b));
  return build_attention_mask(knn_neighbors(centers, k), region_boxes.size(), k);
}

AttentionGraph graph_from_mask(BoolMatrix mask) {
  if (mask.rows() != mask.cols() || mask.rows() < 2) throw std::invalid_argument("graph_from_mask: bad mask shape");
  AttentionGraph g;
  g.node_count = mask.rows();
  g.mask = std::move(mask);
  g.neighbors.resize(g.node_count - 1);
  for (std::size_t i = 1; i < g.node_count; ++i) {
    g.neighbors[i - 1].push_back(i);
    for (std::size_t j = 1; j < g.node_count; ++j)
      if (j != i && g.mask(i, j)) g.neighbors[i - 1].push_back(j);
    g.k = std::max(g.k, g.neighbors[i - 1].size());
  }
  collect_pairs(g);
  return g;
}

}  // namespace docgat
