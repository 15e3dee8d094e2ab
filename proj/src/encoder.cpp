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

#include "docgat/encoder.hpp"

#include <cmath>
#include <cstdio>

#include "docgat/errors.hpp"
#include "docgat/ops.hpp"

namespace docgat {

std::string to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::gate: return "gate";
    case FusionMode::add: return "add";
    case FusionMode::concat: return "concat";
  }
  return "?";
}

FusionMode parse_fusion_mode(std::string_view name) {
  if (name == "gate") return FusionMode::gate;
  if (name == "add") return FusionMode::add;
  if (name == "concat") return FusionMode::concat;
  throw ConfigError("unknown fusion mode '" + std::string(name) + "' (expected gate, add or concat)");
}

void EncoderConfig::validate() const {
  if (layers < 1) throw ConfigError("encoder.layers must be at least 1");
  if (heads < 1) throw ConfigError("encoder.heads must be at least 1");
  if (model_dim == 0 || model_dim % heads != 0) throw ConfigError("encoder.d must be divisible by encoder.heads");
  if (model_dim % 6 != 0) throw ConfigError("encoder.d must be divisible by 6");
  if (top_k < 1) throw ConfigError("encoder.top_k must be at least 1");
  if (residual_gate_layers > layers) throw ConfigError("encoder.residual_gate_layers exceeds encoder.layers");
}

std::string layer_prefix(std::size_t layer) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "encoder.layer%02zu", layer);
  return buf;
}

namespace {

Tensor normal(Shape shape, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  std::vector<double> data(shape_numel(shape));
  for (auto& v : data) v = dist(rng);
  return Tensor::from_data(std::move(shape), std::move(data), true);
}

Tensor linear_weight(std::size_t in, std::size_t out, std::mt19937_64& rng) {
  return normal({in, out}, 1.0 / std::sqrt(static_cast<double>(in)), rng);
}

Tensor zeros_param(Shape shape) { return Tensor::zeros(std::move(shape), true); }

constexpr std::array<const char*, 4> kCornerNames{"tl", "tr", "br", "bl"};

}  // namespace

void init_encoder_parameters(ParameterRegistry& params, const EncoderConfig& config, std::mt19937_64& rng) {
  config.validate();
  const auto d = config.model_dim;
  for (std::size_t l = 0; l < config.layers; ++l) {
    const auto p = layer_prefix(l);
    if (l < config.residual_gate_layers) {
      if (config.fusion == FusionMode::gate) {
        params.add(p + ".gate.w1", linear_weight(2 * d, d, rng));
        params.add(p + ".gate.b1", zeros_param({1, d}));
        params.add(p + ".gate.w2", linear_weight(d, 1, rng));
        params.add(p + ".gate.b2", zeros_param({1, 1}));
      } else if (config.fusion == FusionMode::concat) {
        params.add(p + ".fuse.weight", linear_weight(2 * d, d, rng));
      }
    }
    params.add(p + ".attn.wq", linear_weight(d, d, rng));
    params.add(p + ".attn.wk", linear_weight(d, d, rng));
    params.add(p + ".attn.wv", linear_weight(d, d, rng));
    params.add(p + ".attn.wo", linear_weight(d, d, rng));
    params.add(p + ".attn.bo", zeros_param({1, d}));
    if (config.use_rpe) {
      for (const char* corner : kCornerNames) params.add(p + ".rpe." + corner, normal({d, d}, 0.02, rng));
    }
    params.add(p + ".ffn.w1", linear_weight(d, config.ffn_dim(), rng));
    params.add(p + ".ffn.b1", zeros_param({1, config.ffn_dim()}));
    params.add(p + ".ffn.w2", linear_weight(config.ffn_dim(), d, rng));
    params.add(p + ".ffn.b2", zeros_param({1, d}));
    params.add(p + ".ln.gamma", Tensor::full({1, d}, 1.0, true));
    params.add(p + ".ln.beta", zeros_param({1, d}));
    if (config.standard_block) {
      params.add(p + ".ln_attn.gamma", Tensor::full({1, d}, 1.0, true));
      params.add(p + ".ln_attn.beta", zeros_param({1, d}));
    }
  }
}

DocumentLayout make_document_layout(std::vector<NormalizedBox> boxes, AttentionGraph graph, std::size_t model_dim) {
  if (boxes.size() != graph.node_count) {
    throw ShapeError("make_document_layout: " + std::to_string(boxes.size()) + " boxes for " +
                     std::to_string(graph.node_count) + " graph nodes");
  }
  DocumentLayout layout;
  layout.pair_features = pair_position_features(boxes, graph.pair_rows, graph.pair_cols, model_dim / 2);
  layout.boxes = std::move(boxes);
  layout.graph = std::move(graph);
  return layout;
}

AttentionGraph build_encoder_graph(std::span<const NormalizedBox> region_boxes, const EncoderConfig& config) {
  const std::size_t k = config.use_gat ? config.top_k : std::max<std::size_t>(region_boxes.size(), 1);
  return build_document_graph(region_boxes, k);
}

GateFusionOutput gate_fusion(const Tensor& h_prev, const Tensor& visual, const ParameterRegistry& params,
                             const std::string& prefix) {
  const Tensor joined = concat({visual, h_prev}, 1);
  const Tensor inner = gelu(add(matmul(joined, params.at(prefix + ".gate.w1")), params.at(prefix + ".gate.b1")));
  const Tensor z = sigmoid(add(matmul(inner, params.at(prefix + ".gate.w2")), params.at(prefix + ".gate.b2")));
  const Tensor keep = add_scalar(scale(z, -1.0), 1.0);
  const Tensor fused = add(mul(h_prev, keep), mul(visual, z));
  return {fused, z};
}

Tensor fuse_alternative(const Tensor& h_prev, const Tensor& visual, FusionMode mode, const ParameterRegistry& params,
                        const std::string& prefix) {
  switch (mode) {
    case FusionMode::add: return add(h_prev, visual);
    case FusionMode::concat: return matmul(concat({h_prev, visual}, 1), params.at(prefix + ".fuse.weight"));
    case FusionMode::gate: break;
  }
  throw ConfigError("fuse_alternative: mode must be add or concat");
}

AttentionOutput graph_attention_layer(const Tensor& fused, const DocumentLayout& layout, const ParameterRegistry& params,
                                      const std::string& prefix, const EncoderConfig& config, std::size_t layer_index) {
  const auto& graph = layout.graph;
  const auto nodes = graph.node_count;
  if (fused.rows() != nodes || fused.cols() != config.model_dim) {
    throw ShapeError("graph_attention_layer: input " + shape_to_string(fused.shape()) + " does not match " +
                     std::to_string(nodes) + " nodes of width " + std::to_string(config.model_dim));
  }
  const auto dh = config.head_dim();
  const Tensor q = matmul(fused, params.at(prefix + ".attn.wq"));
  const Tensor k = matmul(fused, params.at(prefix + ".attn.wk"));
  const Tensor v = matmul(fused, params.at(prefix + ".attn.wv"));

  Tensor pair_bias, pair_queries;
  if (config.use_rpe) {
    const std::array<Tensor, 4> corners{params.at(prefix + ".rpe.tl"), params.at(prefix + ".rpe.tr"),
                                        params.at(prefix + ".rpe.br"), params.at(prefix + ".rpe.bl")};
    pair_bias = relative_position_bias(layout.pair_features, corners);
    pair_queries = gather_rows(q, graph.pair_rows);
  }

  AttentionOutput out;
  std::vector<Tensor> head_outputs;
  const double score_scale = config.scale_scores ? 1.0 / std::sqrt(static_cast<double>(dh)) : 1.0;
  for (std::size_t h = 0; h < config.heads; ++h) {
    const auto lo = h * dh, hi = lo + dh;
    const Tensor qh = slice(q, 1, lo, hi);
    Tensor scores = matmul(qh, transpose(slice(k, 1, lo, hi)));
    if (config.scale_scores) scores = scale(scores, score_scale);
    if (config.use_rpe) {
      const Tensor bias = row_sum(mul(slice(pair_queries, 1, lo, hi), slice(pair_bias, 1, lo, hi)));
      scores = add(scores, scatter_to_matrix(bias, graph.pair_rows, graph.pair_cols, nodes, nodes));
    }
    const auto sd = scores.data();
    for (std::size_t i = 0; i < graph.pair_count(); ++i) {
      if (!std::isfinite(sd[graph.pair_rows[i] * nodes + graph.pair_cols[i]])) {
        throw NumericError("non-finite attention score in layer " + std::to_string(layer_index) + " head " +
                           std::to_string(h));
      }
    }
    const Tensor attn = masked_softmax(scores, graph.mask);
    head_outputs.push_back(matmul(attn, slice(v, 1, lo, hi)));
    out.attention.push_back(attn);
  }
  const Tensor joined = head_outputs.size() == 1 ? head_outputs[0] : concat(head_outputs, 1);
  const Tensor attended = add(matmul(joined, params.at(prefix + ".attn.wo")), params.at(prefix + ".attn.bo"));

  auto ffn = [&](const Tensor& x) {
    const Tensor inner = gelu(add(matmul(x, params.at(prefix + ".ffn.w1")), params.at(prefix + ".ffn.b1")));
    return add(matmul(inner, params.at(prefix + ".ffn.w2")), params.at(prefix + ".ffn.b2"));
  };
  Tensor block_in = attended;
  if (config.standard_block) {
    block_in = layer_norm(add(fused, attended), params.at(prefix + ".ln_attn.gamma"), params.at(prefix + ".ln_attn.beta"));
  }
  out.hidden = layer_norm(add(block_in, ffn(block_in)), params.at(prefix + ".ln.gamma"), params.at(prefix + ".ln.beta"));
  return out;
}

EncoderOutput encode_document(const Tensor& sentence, const Tensor& visual, const DocumentLayout& layout,
                              const ParameterRegistry& params, const EncoderConfig& config) {
  if (sentence.shape() != visual.shape()) {
    throw ShapeError("encode_document: S " + shape_to_string(sentence.shape()) + " and V " +
                     shape_to_string(visual.shape()) + " differ");
  }
  EncoderOutput out;
  Tensor hidden = sentence;
  for (std::size_t l = 0; l < config.layers; ++l) {
    const auto prefix = layer_prefix(l);
    LayerTrace trace;
    if (l >= config.residual_gate_layers) {
      trace.fused = hidden;
    } else if (config.fusion == FusionMode::gate) {
      auto g = gate_fusion(hidden, visual, params, prefix);
      trace.fused = g.fused;
      trace.gate = g.gate;
    } else {
      trace.fused = fuse_alternative(hidden, visual, config.fusion, params, prefix);
    }
    auto attn = graph_attention_layer(trace.fused, layout, params, prefix, config, l);
    hidden = attn.hidden;
    trace.hidden = hidden;
    trace.attention = std::move(attn.attention);
    out.layers.push_back(std::move(trace));
  }
  out.hidden = hidden;
  return out;
}

}  // namespace docgat
