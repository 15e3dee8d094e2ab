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

#include "docgat/embeddings.hpp"

#include <cmath>

#include "docgat/checkpoint.hpp"
#include "docgat/errors.hpp"
#include "docgat/ops.hpp"
#include "docgat/random.hpp"

namespace docgat {

std::vector<double> stub_embedding(std::string_view key, std::size_t d_raw, std::uint64_t seed) {
  if (d_raw == 0) throw std::invalid_argument("stub_embedding: d_raw must be positive");
  SplitMix64 rng(fnv1a64(key) ^ (seed * SplitMix64::kGolden));
  std::vector<double> v(d_raw);
  double norm2 = 0.0;
  for (auto& x : v) {
    x = 2.0 * rng.next_unit() - 1.0;
    norm2 += x * x;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= inv;
  return v;
}

namespace {
constexpr std::uint64_t kVisualSeedSalt = 0xA5A5A5A5A5A5A5A5ULL;
}

StubEmbeddingProvider::StubEmbeddingProvider(std::size_t text_dim, std::size_t visual_dim, std::uint64_t seed)
    : text_dim_(text_dim), visual_dim_(visual_dim), seed_(seed) {
  if (text_dim == 0 || visual_dim == 0) throw ConfigError("stub provider dimensions must be positive");
}

std::vector<double> StubEmbeddingProvider::text_features(const DocumentRecord&, const RegionRecord& region) const {
  return stub_embedding(region.text, text_dim_, seed_);
}

std::vector<double> StubEmbeddingProvider::visual_features(const DocumentRecord& doc, const RegionRecord& region) const {
  return stub_embedding(doc.id + '\x1f' + region.id, visual_dim_, seed_ ^ kVisualSeedSalt);
}

PrecomputedEmbeddingProvider::PrecomputedEmbeddingProvider(std::filesystem::path dir, std::size_t text_dim,
                                                           std::size_t visual_dim)
    : dir_(std::move(dir)), text_dim_(text_dim), visual_dim_(visual_dim) {
  if (text_dim == 0 || visual_dim == 0) throw ConfigError("precomputed provider dimensions must be positive");
}

const PrecomputedEmbeddingProvider::Entries& PrecomputedEmbeddingProvider::entries_for(const DocumentRecord& doc) const {
  std::lock_guard lock(mutex_);
  auto it = cache_.find(doc.id);
  if (it != cache_.end()) return it->second;
  const auto path = dir_ / (doc.id + ".bin");
  if (!std::filesystem::exists(path)) throw DataError("no precomputed embeddings for document '" + doc.id + "' at " + path.string());
  Entries entries;
  for (auto& [name, t] : read_container(path).tensors) entries.emplace(name, std::vector<double>(t.data().begin(), t.data().end()));
  return cache_.emplace(doc.id, std::move(entries)).first->second;
}

std::vector<double> PrecomputedEmbeddingProvider::lookup(const DocumentRecord& doc, const std::string& name,
                                                         std::size_t dim) const {
  const auto& entries = entries_for(doc);
  auto it = entries.find(name);
  if (it == entries.end()) throw DataError("document '" + doc.id + "': missing feature row '" + name + "'");
  if (it->second.size() != dim) {
    throw DataError("document '" + doc.id + "': feature '" + name + "' has " + std::to_string(it->second.size()) +
                    " values, expected " + std::to_string(dim));
  }
  return it->second;
}

std::vector<double> PrecomputedEmbeddingProvider::text_features(const DocumentRecord& doc, const RegionRecord& region) const {
  return lookup(doc, "text_raw/" + region.id, text_dim_);
}

std::vector<double> PrecomputedEmbeddingProvider::visual_features(const DocumentRecord& doc,
                                                                  const RegionRecord& region) const {
  return lookup(doc, "vis_raw/" + region.id, visual_dim_);
}

std::optional<std::vector<double>> PrecomputedEmbeddingProvider::global_visual_features(const DocumentRecord& doc) const {
  if (!entries_for(doc).contains("vis_raw/__global__")) return std::nullopt;
  return lookup(doc, "vis_raw/__global__", visual_dim_);
}

void write_precomputed_embeddings(const DocumentRecord& doc, const EmbeddingProvider& provider,
                                  const std::filesystem::path& path, bool include_global) {
  TensorContainer c;
  for (const auto& r : doc.regions) {
    c.tensors.emplace_back("text_raw/" + r.id, Tensor::from_data({1, provider.text_dim()}, provider.text_features(doc, r)));
  }
  for (const auto& r : doc.regions) {
    c.tensors.emplace_back("vis_raw/" + r.id, Tensor::from_data({1, provider.visual_dim()}, provider.visual_features(doc, r)));
  }
  if (include_global) {
    auto global = provider.global_visual_features(doc);
    if (!global) {
      const auto raw = collect_raw_features(doc, provider);
      global = std::vector<double>(raw.visual.data().begin(), raw.visual.data().begin() + static_cast<std::ptrdiff_t>(provider.visual_dim()));
    }
    c.tensors.emplace_back("vis_raw/__global__", Tensor::from_data({1, provider.visual_dim()}, std::move(*global)));
  }
  write_container(path, c);
}

RawFeatures collect_raw_features(const DocumentRecord& doc, const EmbeddingProvider& provider) {
  const auto n = doc.regions.size();
  if (n == 0) throw DataError("document '" + doc.id + "' has no regions");
  const auto dt = provider.text_dim(), dv = provider.visual_dim();
  std::vector<double> text(n * dt);
  std::vector<double> visual((n + 1) * dv, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& region = doc.regions[i];
    std::vector<double> t, v;
    try {
      t = provider.text_features(doc, region);
      v = provider.visual_features(doc, region);
    } catch (const DataError&) {
      throw;
    } catch (const std::exception& e) {
      throw DataError("document '" + doc.id + "' region '" + region.id + "': provider failed: " + e.what());
    }
    if (t.size() != dt || v.size() != dv) {
      throw DataError("document '" + doc.id + "' region '" + region.id + "': provider returned a wrong-sized vector");
    }
    std::copy(t.begin(), t.end(), text.begin() + static_cast<std::ptrdiff_t>(i * dt));
    std::copy(v.begin(), v.end(), visual.begin() + static_cast<std::ptrdiff_t>((i + 1) * dv));
  }
  if (auto global = provider.global_visual_features(doc)) {
    if (global->size() != dv) throw DataError("document '" + doc.id + "': global visual feature has the wrong size");
    std::copy(global->begin(), global->end(), visual.begin());
  } else {
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t c = 0; c < dv; ++c) visual[c] += visual[i * dv + c];
    for (std::size_t c = 0; c < dv; ++c) visual[c] /= static_cast<double>(n);
  }
  return {Tensor::from_data({n, dt}, std::move(text)), Tensor::from_data({n + 1, dv}, std::move(visual))};
}

namespace {

Tensor project(const Tensor& raw, const ParameterRegistry& params, const std::string& prefix) {
  Tensor out = matmul(raw, params.at(prefix + ".weight"));
  if (params.contains(prefix + ".bias")) out = add(out, params.at(prefix + ".bias"));
  return out;
}

}  // namespace

Tensor sentence_text_part(const Tensor& text_raw, const ParameterRegistry& params) {
  return concat({params.at("embed.cls"), project(text_raw, params, "embed.text_proj")}, 0);
}

Tensor sentence_embeddings(const Tensor& text_raw, const Tensor& layout, const ParameterRegistry& params) {
  return add(sentence_text_part(text_raw, params), layout);
}

Tensor visual_embeddings(const Tensor& visual_raw, const Tensor& layout, const ParameterRegistry& params) {
  return add(project(visual_raw, params, "embed.vis_proj"), layout);
}

}  // namespace docgat
