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
#include <vector>

#include "docgat/registry.hpp"

namespace docgat {

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// Adam with bias correction. Moment buffers are keyed by parameter name.
class Adam {
 public:
  explicit Adam(AdamConfig config = {}) : config_(config) {}

  void step(ParameterRegistry& params, double lr);
  std::size_t steps() const { return steps_; }

 private:
  AdamConfig config_;
  std::size_t steps_ = 0;
  std::map<std::string, std::vector<double>, std::less<>> m_;
  std::map<std::string, std::vector<double>, std::less<>> v_;
};

/// Linear warmup from 0 to `peak` over the first warmup_fraction of
/// `total_steps`, then linear decay to 0 at `total_steps`.
class LinearWarmupDecay {
 public:
  LinearWarmupDecay(double peak, std::size_t total_steps, double warmup_fraction = 0.1);

  double at(std::size_t step) const;
  std::size_t warmup_steps() const { return warmup_; }
  std::size_t total_steps() const { return total_; }

 private:
  double peak_;
  std::size_t total_;
  std::size_t warmup_;
};

double global_grad_norm(const ParameterRegistry& params);

/// Rescales all gradients so their global L2 norm is at most max_norm.
/// Returns the norm before clipping.
double clip_grad_norm(ParameterRegistry& params, double max_norm);

/// Clip then Adam update. Throws NumericError when the gradient norm is not
/// finite; returns the pre-clip norm.
double apply_update(ParameterRegistry& params, Adam& adam, double lr, double clip_norm);

}  // namespace docgat
