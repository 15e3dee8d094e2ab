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
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docgat/document.hpp"
#include "docgat/registry.hpp"
#include "docgat/tensor.hpp"

namespace docgat {

/// Source of frozen raw features for regions. Implementations are pure: the
/// same region always yields the same vector.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string name() const = 0;
  virtual std::size_t text_dim() const = 0;
  virtual std::size_t visual_dim() const = 0;

  virtual std::vector<double> text_features(const DocumentRecord& doc, const RegionRecord& region) const = 0;
  virtual std::vector<double> visual_features(const DocumentRecord& doc, const RegionRecord& region) const = 0;
  /// Whole-image feature for the global node; nullopt means "pool the regions".
  virtual std::optional<std::vector<double>> global_visual_features(const DocumentRecord&) const {
    return std::nullopt;
  }
};

/// Deterministic stand-in vector for `key`.
///
/// state = fnv1a64(key) XOR (seed * 0x9E3779B97F4A7C15); each component is
/// 2u - 1 with u = (splitmix64() >> 11) * 2^-53, and the vector is then
/// scaled to unit L2 norm.
std::vector<double> stub_embedding(std::string_view key, std::size_t d_raw, std::uint64_t seed);

/// Text features hash the region text; visual features hash
/// "<doc id>\x1f<region id>" under a separate seed stream.
class StubEmbeddingProvider final : public EmbeddingProvider {
 public:
  explicit StubEmbeddingProvider(std::size_t text_dim = 384, std::size_t visual_dim = 256, std::uint64_t seed = 0);

  std::string name() const override { return "stub"; }
  std::size_t text_dim() const override { return text_dim_; }
  std::size_t visual_dim() const override { return visual_dim_; }
  std::vector<double> text_features(const DocumentRecord& doc, const RegionRecord& region) const override;
  std::vector<double> visual_features(const DocumentRecord& doc, const RegionRecord& region) const override;

 private:
  std::size_t text_dim_;
  std::size_t visual_dim_;
  std::uint64_t seed_;
};

/// Reads `<dir>/<doc id>.bin` tensor containers holding `text_raw/<region id>`,
/// `vis_raw/<region id>` and optionally `vis_raw/__global__`, each [1 x dim].
class PrecomputedEmbeddingProvider final : public EmbeddingProvider {
 public:
  PrecomputedEmbeddingProvider(std::filesystem::path dir, std::size_t text_dim, std::size_t visual_dim);

  std::string name() const override { return "precomputed"; }
  std::size_t text_dim() const override { return text_dim_; }
  std::size_t visual_dim() const override { return visual_dim_; }
  std::vector<double> text_features(const DocumentRecord& doc, const RegionRecord& region) const override;
  std::vector<double> visual_features(const DocumentRecord& doc, const RegionRecord& region) const override;
  std::optional<std::vector<double>> global_visual_features(const DocumentRecord& doc) const override;

 private:
  using Entries = std::map<std::string, std::vector<double>, std::less<>>;
  const Entries& entries_for(const DocumentRecord& doc) const;
  std::vector<double> lookup(const DocumentRecord& doc, const std::string& name, std::size_t dim) const;

  std::filesystem::path dir_;
  std::size_t text_dim_;
  std::size_t visual_dim_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, Entries> cache_;
};

/// Writes the provider's features for `doc` in the precomputed layout.
void write_precomputed_embeddings(const DocumentRecord& doc, const EmbeddingProvider& provider,
                                  const std::filesystem::path& path, bool include_global = false);

/// Raw provider outputs for one document, as constants (no gradient).
struct RawFeatures {
  Tensor text;    // [n x d_text]
  Tensor visual;  // [(n + 1) x d_vis]; row 0 is the pooled or explicit global feature
};

RawFeatures collect_raw_features(const DocumentRecord& doc, const EmbeddingProvider& provider);

/// Projected text part before layout is added: row 0 = embed.cls, rows
/// 1..n = text_raw * embed.text_proj.weight (+ bias).
Tensor sentence_text_part(const Tensor& text_raw, const ParameterRegistry& params);

/// s_i = Proj(text_i) + l_i, s_0 = cls + l_0.
Tensor sentence_embeddings(const Tensor& text_raw, const Tensor& layout, const ParameterRegistry& params);

/// v_i = Proj(visual_i) + l_i for all n + 1 rows.
Tensor visual_embeddings(const Tensor& visual_raw, const Tensor& layout, const ParameterRegistry& params);

}  // namespace docgat
