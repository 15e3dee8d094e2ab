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

#include <cstddef>
#include <span>
#include <vector>

#include "docgat/layout.hpp"
#include "docgat/ops.hpp"

namespace docgat {

struct Center {
  double x = 0.0;
  double y = 0.0;
};

/// Midpoint of corners 0 and 2.
Center box_center(const NormalizedBox& box);

/// neighbors[i - 1] lists the nodes of N(i) for region node i (1-based node
/// indices). Self comes first, then the nearest other nodes in order of
/// increasing distance, ties going to the lower index.
using NeighborSets = std::vector<std::vector<std::size_t>>;

/// Top-k neighborhoods by Euclidean distance between centers; centers[i]
/// belongs to node i + 1. When n <= k every node sees all n nodes.
NeighborSets knn_neighbors(std::span<const Center> centers, std::size_t k);

/// Neighborhood structure over n + 1 nodes, node 0 being the global node.
/// mask(i, j) means node i may attend to node j. The permitted pairs are
/// also listed in row-major order for the sparse position-bias path.
struct AttentionGraph {
  std::size_t node_count = 0;
  std::size_t k = 0;
  NeighborSets neighbors;
  BoolMatrix mask;
  std::vector<std::size_t> pair_rows;
  std::vector<std::size_t> pair_cols;

  std::size_t region_count() const { return node_count - 1; }
  std::size_t pair_count() const { return pair_rows.size(); }
};

/// mask(i, j) = j in N(i) or j == 0 for i >= 1; row 0 is all true.
AttentionGraph build_attention_mask(const NeighborSets& neighbors, std::size_t n, std::size_t k);

/// Top-k graph for the region boxes of one document (global node excluded).
AttentionGraph build_document_graph(std::span<const NormalizedBox> region_boxes, std::size_t k);

/// Graph for an arbitrary mask (e.g. a permuted one); neighbor lists are
/// derived from the mask rows.
AttentionGraph graph_from_mask(BoolMatrix mask);

}  // namespace docgat
