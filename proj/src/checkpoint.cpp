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

#include "docgat/checkpoint.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "docgat/errors.hpp"

namespace docgat {
namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(const std::string& bytes, std::size_t offset, int width) {
  std::uint64_t v = 0;
  for (int i = 0; i < width; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[offset + static_cast<std::size_t>(i)])) << (8 * i);
  }
  return v;
}

}  // namespace

const Tensor* TensorContainer::find(const std::string& name) const {
  for (const auto& [n, t] : tensors)
    if (n == name) return &t;
  return nullptr;
}

std::string encode_container(const TensorContainer& container) {
  nlohmann::json manifest;
  manifest["tensors"] = nlohmann::json::array();
  std::size_t values = 0;
  for (const auto& [name, t] : container.tensors) {
    manifest["tensors"].push_back({{"name", name}, {"shape", t.shape()}, {"dtype", "f32"}});
    values += t.numel();
  }
  if (!container.metadata.is_null()) manifest["metadata"] = container.metadata;
  const std::string text = manifest.dump();

  std::string out;
  out.reserve(8 + text.size() + values * 4);
  put_u64(out, text.size());
  out += text;
  for (const auto& [name, t] : container.tensors) {
    for (double v : t.data()) {
      if (!std::isfinite(v)) throw CheckpointError("tensor '" + name + "' holds a non-finite value");
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  return out;
}

TensorContainer decode_container(const std::string& bytes, const std::string& source) {
  if (bytes.size() < 8) throw CheckpointError(source + ": truncated header");
  const auto manifest_len = get_le(bytes, 0, 8);
  if (manifest_len > bytes.size() - 8) throw CheckpointError(source + ": manifest length exceeds file size");

  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(bytes.substr(8, manifest_len));
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError(source + ": manifest is not valid JSON: " + e.what());
  }
  if (!manifest.is_object() || !manifest.contains("tensors") || !manifest["tensors"].is_array()) {
    throw CheckpointError(source + ": manifest lacks a tensor list");
  }

  TensorContainer out;
  if (manifest.contains("metadata")) out.metadata = manifest["metadata"];
  std::size_t offset = 8 + manifest_len;
  for (const auto& entry : manifest["tensors"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry.contains("shape")) {
      throw CheckpointError(source + ": malformed manifest entry");
    }
    const auto name = entry["name"].get<std::string>();
    if (entry.value("dtype", "f32") != "f32") throw CheckpointError(source + ": tensor '" + name + "' has unsupported dtype");
    const auto shape = entry["shape"].get<Shape>();
    if (shape.empty()) throw CheckpointError(source + ": tensor '" + name + "' has an empty shape");
    const auto count = shape_numel(shape);
    if (count == 0 || offset + count * 4 > bytes.size()) {
      throw CheckpointError(source + ": payload too short for tensor '" + name + "'");
    }
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) {
      data[i] = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(bytes, offset + 4 * i, 4)));
    }
    offset += count * 4;
    out.tensors.emplace_back(name, Tensor::from_data(shape, std::move(data)));
  }
  if (offset != bytes.size()) throw CheckpointError(source + ": payload length does not match the manifest");
  return out;
}

void write_container(const std::filesystem::path& path, const TensorContainer& container) {
  const auto bytes = encode_container(container);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

TensorContainer read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return decode_container(buffer.str(), path.string());
}

void save_checkpoint(const ParameterRegistry& registry, const std::filesystem::path& path,
                     const nlohmann::json& metadata) {
  TensorContainer c;
  for (const auto& [name, t] : registry) c.tensors.emplace_back(name, t);
  c.metadata = metadata;
  write_container(path, c);
}

ParameterRegistry load_checkpoint(const std::filesystem::path& path, nlohmann::json* metadata) {
  auto c = read_container(path);
  ParameterRegistry reg;
  for (auto& [name, t] : c.tensors) {
    if (reg.contains(name)) throw CheckpointError(path.string() + ": duplicate tensor '" + name + "'");
    reg.add(name, Tensor::from_data(t.shape(), {t.data().begin(), t.data().end()}, true));
  }
  if (metadata) *metadata = c.metadata;
  return reg;
}

void load_checkpoint_into(ParameterRegistry& target, const std::filesystem::path& path) {
  const auto loaded = load_checkpoint(path);
  auto it_t = target.begin();
  auto it_l = loaded.begin();
  while (it_t != target.end() || it_l != loaded.end()) {
    if (it_t == target.end()) throw CheckpointError("checkpoint has unexpected tensor '" + it_l->first + "'");
    if (it_l == loaded.end()) throw CheckpointError("checkpoint is missing tensor '" + it_t->first + "'");
    if (it_t->first != it_l->first) {
      const auto& first = std::min(it_t->first, it_l->first);
      throw CheckpointError("checkpoint manifest mismatch at '" + first + "'");
    }
    if (it_t->second.shape() != it_l->second.shape()) {
      throw CheckpointError("checkpoint tensor '" + it_t->first + "' has shape " +
                            shape_to_string(it_l->second.shape()) + ", expected " +
                            shape_to_string(it_t->second.shape()));
    }
    ++it_t;
    ++it_l;
  }
  copy_matching_parameters(target, loaded);
}

std::size_t copy_matching_parameters(ParameterRegistry& target, const ParameterRegistry& source) {
  std::size_t copied = 0;
  for (auto& [name, t] : target) {
    if (!source.contains(name)) continue;
    const auto& s = source.at(name);
    if (s.shape() != t.shape()) {
      throw CheckpointError("tensor '" + name + "' has shape " + shape_to_string(s.shape()) + ", expected " +
                            shape_to_string(t.shape()));
    }
    auto dst = t.mutable_data();
    std::copy(s.data().begin(), s.data().end(), dst.begin());
    ++copied;
  }
  return copied;
}

}  // namespace docgat
