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

#include <random>
#include <string>
#include <vector>

#include "docgat/document.hpp"
#include "docgat/model.hpp"

namespace docgat::testing {

inline ModelConfig tiny_model(std::size_t layers = 2, std::size_t top_k = 3) {
  ModelConfig m;
  m.encoder.layers = layers;
  m.encoder.model_dim = 24;
  m.encoder.heads = 2;
  m.encoder.top_k = top_k;
  m.encoder.residual_gate_layers = layers;
  m.text_dim = 16;
  m.visual_dim = 8;
  return m;
}

/// Document with `n` regions at pseudo-random positions on a 1000x1000 page.
inline DocumentRecord scattered_document(const std::string& id, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pos(0, 900);
  std::uniform_int_distribution<int> size(20, 100);
  DocumentRecord doc{id, 1000, 1000, {}, std::nullopt};
  for (std::size_t i = 0; i < n; ++i) {
    const int x = pos(rng), y = pos(rng);
    doc.regions.push_back({"r" + std::to_string(i), "text " + std::to_string(seed) + "/" + std::to_string(i),
                           BoundingBox::from_corners(x, y, x + size(rng), y + size(rng) / 4), std::nullopt});
  }
  return doc;
}

inline Tensor random_tensor(Shape shape, std::mt19937_64& rng, double scale = 1.0, bool requires_grad = false) {
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(shape_numel(shape));
  for (auto& x : v) x = dist(rng);
  return Tensor::from_data(std::move(shape), std::move(v), requires_grad);
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace docgat::testing
