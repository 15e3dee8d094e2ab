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

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "docgat/registry.hpp"
#include "docgat/tensor.hpp"

namespace docgat {

/// Binary tensor container shared by checkpoints, precomputed embeddings and
/// attention dumps:
///
///   u64 little-endian  manifest byte length
///   UTF-8 JSON         {"metadata":{...}?, "tensors":[{"dtype":"f32","name":..,"shape":[..]}, ..]}
///   payload            little-endian IEEE-754 float32 values, tensors
///                      concatenated in manifest order
///
/// Values are stored at 32-bit precision; readers return 64-bit tensors.
struct TensorContainer {
  std::vector<std::pair<std::string, Tensor>> tensors;
  nlohmann::json metadata;  // null when absent

  const Tensor* find(const std::string& name) const;
};

std::string encode_container(const TensorContainer& container);
TensorContainer decode_container(const std::string& bytes, const std::string& source = "<memory>");

void write_container(const std::filesystem::path& path, const TensorContainer& container);
TensorContainer read_container(const std::filesystem::path& path);

/// Writes the registry in lexicographic name order.
void save_checkpoint(const ParameterRegistry& registry, const std::filesystem::path& path,
                     const nlohmann::json& metadata = nullptr);

/// Reads every tensor as a trainable parameter.
ParameterRegistry load_checkpoint(const std::filesystem::path& path, nlohmann::json* metadata = nullptr);

/// Overwrites the values of `target` from `path`. Names and shapes must match
/// exactly; a mismatch raises CheckpointError naming the first offender.
void load_checkpoint_into(ParameterRegistry& target, const std::filesystem::path& path);

/// Copies values for the names present in both; returns how many were copied.
/// Shapes must match for every shared name.
std::size_t copy_matching_parameters(ParameterRegistry& target, const ParameterRegistry& source);

}  // namespace docgat
