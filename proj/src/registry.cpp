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

#include "docgat/registry.hpp"

#include "docgat/errors.hpp"

namespace docgat {

Tensor& ParameterRegistry::add(std::string name, Tensor tensor) {
  if (!tensor.defined()) throw Error("parameter '" + name + "' is undefined");
  auto [it, inserted] = params_.emplace(std::move(name), std::move(tensor));
  if (!inserted) throw Error("duplicate parameter name '" + it->first + "'");
  return it->second;
}

bool ParameterRegistry::contains(std::string_view name) const { return params_.find(name) != params_.end(); }

const Tensor& ParameterRegistry::at(std::string_view name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error("unknown parameter '" + std::string(name) + "'");
  return it->second;
}

Tensor& ParameterRegistry::at(std::string_view name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw Error("unknown parameter '" + std::string(name) + "'");
  return it->second;
}

std::size_t ParameterRegistry::element_count() const {
  std::size_t total = 0;
  for (const auto& [_, t] : params_) total += t.numel();
  return total;
}

std::vector<std::string> ParameterRegistry::names() const {
  std::vector<std::string> out;
  out.reserve(params_.size());
  for (const auto& [name, _] : params_) out.push_back(name);
  return out;
}

void ParameterRegistry::zero_grad() {
  for (auto& [_, t] : params_) t.zero_grad();
}

ParameterRegistry ParameterRegistry::clone() const {
  ParameterRegistry copy;
  for (const auto& [name, t] : params_) copy.add(name, t.clone());
  return copy;
}

}  // namespace docgat
