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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "docgat/graph.hpp"
#include "docgat/layout.hpp"
#include "docgat/registry.hpp"
#include "docgat/tensor.hpp"

namespace docgat {

enum class FusionMode { gate, add, concat };

std::string to_string(FusionMode mode);
FusionMode parse_fusion_mode(std::string_view name);

struct EncoderConfig {
  std::size_t layers = 12;
  std::size_t model_dim = 768;
  std::size_t heads = 12;
  std::size_t top_k = 36;
  FusionMode fusion = FusionMode::gate;
  // The first `residual_gate_layers` blocks fuse V into their input; the
  // remaining blocks take the previous hidden state unchanged.
  std::size_t residual_gate_layers = 12;
  bool use_rpe = true;
  // false: every node attends to every node (plain Transformer attention).
  bool use_gat = true;
  // Divide content scores by sqrt(head_dim).
  bool scale_scores = true;
  // false: h = LN(a + FFN(a)) on the attention output a.
  // true:  a' = LN(m + a), h = LN(a' + FFN(a')).
  bool standard_block = false;

  std::size_t head_dim() const { return model_dim / heads; }
  std::size_t ffn_dim() const { return 4 * model_dim; }
  void validate() const;
};

/// "encoder.layer03" etc.
std::string layer_prefix(std::size_t layer);

void init_encoder_parameters(ParameterRegistry& params, const EncoderConfig& config, std::mt19937_64& rng);

/// Static per-document inputs to the attention layers: normalized boxes
/// (index 0 = global node), the attention graph, and the relative position
/// encodings for the graph's permitted pairs.
struct DocumentLayout {
  std::vector<NormalizedBox> boxes;
  AttentionGraph graph;
  PairPositionFeatures pair_features;
};

DocumentLayout make_document_layout(std::vector<NormalizedBox> boxes, AttentionGraph graph, std::size_t model_dim);

/// Graph for `region_boxes` under the config: top-k when use_gat, else dense.
AttentionGraph build_encoder_graph(std::span<const NormalizedBox> region_boxes, const EncoderConfig& config);

struct GateFusionOutput {
  Tensor fused;  // [(n+1) x d]
  Tensor gate;   // [(n+1) x 1]
};

/// z = sigmoid(gelu([v ; h] W1 + b1) W2 + b2), m = (1 - z) h + z v.
GateFusionOutput gate_fusion(const Tensor& h_prev, const Tensor& visual, const ParameterRegistry& params,
                             const std::string& prefix);

/// add: m = h + v. concat: m = [h ; v] P with P of shape [2d x d].
Tensor fuse_alternative(const Tensor& h_prev, const Tensor& visual, FusionMode mode, const ParameterRegistry& params,
                        const std::string& prefix);

struct AttentionOutput {
  Tensor hidden;                   // [(n+1) x d]
  std::vector<Tensor> attention;   // per head, [(n+1) x (n+1)]
};

AttentionOutput graph_attention_layer(const Tensor& fused, const DocumentLayout& layout, const ParameterRegistry& params,
                                      const std::string& prefix, const EncoderConfig& config, std::size_t layer_index);

struct LayerTrace {
  Tensor fused;
  Tensor gate;  // undefined unless the block used gate fusion
  Tensor hidden;
  std::vector<Tensor> attention;
};

struct EncoderOutput {
  Tensor hidden;
  std::vector<LayerTrace> layers;
};

/// H^0 = S; for each block M^l = fuse(H^{l-1}, V), H^l = attention(M^l).
EncoderOutput encode_document(const Tensor& sentence, const Tensor& visual, const DocumentLayout& layout,
                              const ParameterRegistry& params, const EncoderConfig& config);

}  // namespace docgat
