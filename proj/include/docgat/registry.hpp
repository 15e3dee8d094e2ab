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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "docgat/tensor.hpp"

namespace docgat {

/// Named trainable parameters, iterated in lexicographic name order.
///
/// Copying a registry copies handles, so both copies alias the same
/// storage; use clone() for an independent set.
class ParameterRegistry {
 public:
  using Map = std::map<std::string, Tensor, std::less<>>;

  Tensor& add(std::string name, Tensor tensor);
  bool contains(std::string_view name) const;
  const Tensor& at(std::string_view name) const;
  Tensor& at(std::string_view name);

  std::size_t size() const { return params_.size(); }
  bool empty() const { return params_.empty(); }
  std::size_t element_count() const;
  std::vector<std::string> names() const;

  Map::const_iterator begin() const { return params_.begin(); }
  Map::const_iterator end() const { return params_.end(); }
  Map::iterator begin() { return params_.begin(); }
  Map::iterator end() { return params_.end(); }

  void zero_grad();
  ParameterRegistry clone() const;

 private:
  Map params_;
};

}  // namespace docgat
