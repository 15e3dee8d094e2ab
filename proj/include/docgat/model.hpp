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
#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include "json.hpp"

#include "docgat/document.hpp"
#include "docgat/embeddings.hpp"
#include "docgat/encoder.hpp"
#include "docgat/registry.hpp"

namespace docgat {

struct ModelConfig {
  EncoderConfig encoder;
  std::size_t text_dim = 384;
  std::size_t visual_dim = 256;
  bool projection_bias = true;

  void validate() const;
};

nlohmann::json encoder_config_to_json(const EncoderConfig& config);
/// Reads the keys present in `j` over `config`; unknown keys raise ConfigError.
void encoder_config_from_json(const nlohmann::json& j, EncoderConfig& config);

/// Embedding and encoder parameters (heads are added separately).
ParameterRegistry init_model_parameters(const ModelConfig& config, std::uint64_t seed);

void add_msm_head(ParameterRegistry& params, std::size_t model_dim, std::mt19937_64& rng);
void add_entity_head(ParameterRegistry& params, std::size_t model_dim, std::size_t classes, std::mt19937_64& rng);
void add_doc_head(ParameterRegistry& params, std::size_t model_dim, std::size_t classes, std::mt19937_64& rng);

/// Everything about a document that does not depend on parameters: frozen
/// provider features, normalized boxes, attention graph and pair encodings.
struct PreparedDocument {
  const DocumentRecord* record = nullptr;
  RawFeatures raw;
  DocumentLayout layout;

  std::size_t region_count() const { return layout.boxes.size() - 1; }
};

/// Normalized region boxes, without the global node.
std::vector<NormalizedBox> normalized_region_boxes(const DocumentRecord& doc);

PreparedDocument prepare_document(const DocumentRecord& doc, const EmbeddingProvider& provider,
                                  const ModelConfig& config);
std::vector<PreparedDocument> prepare_corpus(std::span<const DocumentRecord> docs, const EmbeddingProvider& provider,
                                             const ModelConfig& config);

struct NodeEmbeddings {
  Tensor layout;     // L
  Tensor text_part;  // S - L
  Tensor sentence;   // S
  Tensor visual;     // V
};

NodeEmbeddings embed_document(const PreparedDocument& doc, const ParameterRegistry& params);

/// Embeds and encodes with unmasked sentence embeddings.
EncoderOutput forward_document(const PreparedDocument& doc, const ParameterRegistry& params, const ModelConfig& config);

std::unique_ptr<EmbeddingProvider> make_stub_provider(const ModelConfig& config, std::uint64_t seed = 0);

}  // namespace docgat
