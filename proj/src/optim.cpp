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

#include "docgat/optim.hpp"

#include <cmath>

#include "docgat/errors.hpp"

namespace docgat {

void Adam::step(ParameterRegistry& params, double lr) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(config_.beta1, t);
  const double c2 = 1.0 - std::pow(config_.beta2, t);
  for (auto& [name, p] : params) {
    if (!p.requires_grad() || !p.has_grad()) continue;
    auto& m = m_[name];
    auto& v = v_[name];
    if (m.size() != p.numel()) {
      m.assign(p.numel(), 0.0);
      v.assign(p.numel(), 0.0);
    }
    auto g = p.grad();
    auto x = p.mutable_data();
    for (std::size_t i = 0; i < x.size(); ++i) {
      m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g[i];
      v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g[i] * g[i];
      x[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + config_.eps);
    }
  }
}

LinearWarmupDecay::LinearWarmupDecay(double peak, std::size_t total_steps, double warmup_fraction)
    : peak_(peak), total_(total_steps) {
  if (peak < 0) throw ConfigError("learning rate must be non-negative");
  if (warmup_fraction < 0 || warmup_fraction > 1) throw ConfigError("warmup fraction must lie in [0, 1]");
  warmup_ = static_cast<std::size_t>(std::lround(warmup_fraction * static_cast<double>(total_steps)));
}

double LinearWarmupDecay::at(std::size_t step) const {
  if (total_ == 0 || step >= total_) return 0.0;
  if (step < warmup_) return peak_ * static_cast<double>(step) / static_cast<double>(warmup_);
  return peak_ * static_cast<double>(total_ - step) / static_cast<double>(total_ - warmup_);
}

double global_grad_norm(const ParameterRegistry& params) {
  double total = 0.0;
  for (const auto& [_, p] : params)
    for (double g : p.grad()) total += g * g;
  return std::sqrt(total);
}

double clip_grad_norm(ParameterRegistry& params, double max_norm) {
  const double norm = global_grad_norm(params);
  if (norm > max_norm && norm > 0) {
    const double factor = max_norm / norm;
    for (auto& [_, p] : params) {
      if (!p.has_grad()) continue;
      for (double& g : p.mutable_grad()) g *= factor;
    }
  }
  return norm;
}

double apply_update(ParameterRegistry& params, Adam& adam, double lr, double clip_norm) {
  const double norm = clip_grad_norm(params, clip_norm);
  if (!std::isfinite(norm)) throw NumericError("gradient norm is not finite");
  adam.step(params, lr);
  return norm;
}

}  // namespace docgat
