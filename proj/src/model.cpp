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

#include "docgat/model.hpp"

#include <cmath>

#include "docgat/errors.hpp"
#include "docgat/layout.hpp"

namespace docgat {

void ModelConfig::validate() const {
  encoder.validate();
  if (text_dim == 0 || visual_dim == 0) throw ConfigError("embedding dimensions must be positive");
}

nlohmann::json encoder_config_to_json(const EncoderConfig& c) {
  return {{"layers", c.layers},
          {"d", c.model_dim},
          {"heads", c.heads},
          {"top_k", c.top_k},
          {"fusion", to_string(c.fusion)},
          {"residual_gate_layers", c.residual_gate_layers},
          {"use_rpe", c.use_rpe},
          {"use_gat", c.use_gat},
          {"scale_scores", c.scale_scores},
          {"standard_block", c.standard_block}};
}

void encoder_config_from_json(const nlohmann::json& j, EncoderConfig& c) {
  if (!j.is_object()) throw ConfigError("encoder: expected an object");
  bool residual_given = false;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "layers") c.layers = value.get<std::size_t>();
      else if (key == "d") c.model_dim = value.get<std::size_t>();
      else if (key == "heads") c.heads = value.get<std::size_t>();
      else if (key == "top_k") c.top_k = value.get<std::size_t>();
      else if (key == "fusion") c.fusion = parse_fusion_mode(value.get<std::string>());
      else if (key == "residual_gate_layers") {
        c.residual_gate_layers = value.get<std::size_t>();
        residual_given = true;
      } else if (key == "use_rpe") c.use_rpe = value.get<bool>();
      else if (key == "use_gat") c.use_gat = value.get<bool>();
      else if (key == "scale_scores") c.scale_scores = value.get<bool>();
      else if (key == "standard_block") c.standard_block = value.get<bool>();
      else throw ConfigError("encoder: unknown key '" + key + "'");
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("encoder." + key + ": " + e.what());
    }
  }
  if (!residual_given) c.residual_gate_layers = c.layers;
}

namespace {

Tensor normal(Shape shape, double stddev, std::mt19937_64& rng) {
  std::normal_distribution<double> dist(0.0, stddev);
  std::vector<double> data(shape_numel(shape));
  for (auto& v : data) v = dist(rng);
  return Tensor::from_data(std::move(shape), std::move(data), true);
}

void add_linear(ParameterRegistry& params, const std::string& prefix, std::size_t in, std::size_t out, bool bias,
                std::mt19937_64& rng) {
  params.add(prefix + ".weight", normal({in, out}, 1.0 / std::sqrt(static_cast<double>(in)), rng));
  if (bias) params.add(prefix + ".bias", Tensor::zeros({1, out}, true));
}

}  // namespace

ParameterRegistry init_model_parameters(const ModelConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  ParameterRegistry params;
  const auto d = config.encoder.model_dim;
  params.add("embed.layout.x_table", normal({kLayoutTableRows, d / 6}, 0.1, rng));
  params.add("embed.layout.y_table", normal({kLayoutTableRows, d / 6}, 0.1, rng));
  add_linear(params, "embed.text_proj", config.text_dim, d, config.projection_bias, rng);
  add_linear(params, "embed.vis_proj", config.visual_dim, d, config.projection_bias, rng);
  params.add("embed.cls", normal({1, d}, 0.1, rng));
  params.add("embed.mask_token", normal({1, d}, 0.1, rng));
  init_encoder_parameters(params, config.encoder, rng);
  return params;
}

void add_msm_head(ParameterRegistry& params, std::size_t model_dim, std::mt19937_64& rng) {
  add_linear(params, "head.msm", model_dim, model_dim, true, rng);
}

void add_entity_head(ParameterRegistry& params, std::size_t model_dim, std::size_t classes, std::mt19937_64& rng) {
  if (classes == 0) throw ConfigError("entity head needs at least one label");
  add_linear(params, "head.entity", model_dim, classes, true, rng);
}

void add_doc_head(ParameterRegistry& params, std::size_t model_dim, std::size_t classes, std::mt19937_64& rng) {
  if (classes == 0) throw ConfigError("document head needs at least one class");
  add_linear(params, "head.doc", model_dim, classes, true, rng);
}

std::vector<NormalizedBox> normalized_region_boxes(const DocumentRecord& doc) {
  std::vector<NormalizedBox> boxes;
  boxes.reserve(doc.regions.size());
  for (const auto& r : doc.regions) boxes.push_back(normalize_box(r.box, doc.width, doc.height));
  return boxes;
}

PreparedDocument prepare_document(const DocumentRecord& doc, const EmbeddingProvider& provider,
                                  const ModelConfig& config) {
  if (doc.regions.empty()) throw DataError("document '" + doc.id + "' is empty");
  if (provider.text_dim() != config.text_dim || provider.visual_dim() != config.visual_dim) {
    throw ConfigError("provider '" + provider.name() + "' dimensions do not match the model configuration");
  }
  PreparedDocument out;
  out.record = &doc;
  out.raw = collect_raw_features(doc, provider);
  auto regions = normalized_region_boxes(doc);
  auto graph = build_encoder_graph(regions, config.encoder);
  std::vector<NormalizedBox> boxes;
  boxes.reserve(regions.size() + 1);
  boxes.push_back(NormalizedBox::full_page());
  boxes.insert(boxes.end(), regions.begin(), regions.end());
  out.layout = make_document_layout(std::move(boxes), std::move(graph), config.encoder.model_dim);
  return out;
}

std::vector<PreparedDocument> prepare_corpus(std::span<const DocumentRecord> docs, const EmbeddingProvider& provider,
                                             const ModelConfig& config) {
  std::vector<PreparedDocument> out;
  out.reserve(docs.size());
  for (const auto& d : docs) out.push_back(prepare_document(d, provider, config));
  return out;
}

NodeEmbeddings embed_document(const PreparedDocument& doc, const ParameterRegistry& params) {
  NodeEmbeddings e;
  e.layout = layout_embed(doc.layout.boxes, params.at("embed.layout.x_table"), params.at("embed.layout.y_table"));
  e.text_part = sentence_text_part(doc.raw.text, params);
  e.sentence = add(e.text_part, e.layout);
  e.visual = visual_embeddings(doc.raw.visual, e.layout, params);
  return e;
}

EncoderOutput forward_document(const PreparedDocument& doc, const ParameterRegistry& params, const ModelConfig& config) {
  const auto e = embed_document(doc, params);
  return encode_document(e.sentence, e.visual, doc.layout, params, config.encoder);
}

std::unique_ptr<EmbeddingProvider> make_stub_provider(const ModelConfig& config, std::uint64_t seed) {
  return std::make_unique<StubEmbeddingProvider>(config.text_dim, config.visual_dim, seed);
}

}  // namespace docgat
