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

#include "docgat/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "docgat/errors.hpp"

namespace docgat {
namespace {

double evaluate(const std::function<Tensor(const ParameterRegistry&)>& loss_fn, const ParameterRegistry& registry) {
  const double value = loss_fn(registry).item();
  if (!std::isfinite(value)) throw NumericError("grad_check: loss is not finite");
  return value;
}

}  // namespace

GradCheckResult grad_check(const std::function<Tensor(const ParameterRegistry&)>& loss_fn,
                           ParameterRegistry& registry, double eps) {
  if (!(eps > 1e-8 && eps < 1e-3)) throw std::invalid_argument("grad_check: eps must lie in (1e-8, 1e-3)");

  registry.zero_grad();
  const Tensor loss = loss_fn(registry);
  if (!std::isfinite(loss.item())) throw NumericError("grad_check: loss is not finite");
  loss.backward();

  GradCheckResult result;
  NoGradGuard no_grad;
  for (auto& [name, param] : registry) {
    if (!param.requires_grad()) continue;
    std::vector<double> analytic(param.numel(), 0.0);
    if (param.has_grad()) std::copy(param.grad().begin(), param.grad().end(), analytic.begin());
    auto values = param.mutable_data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double original = values[i];
      values[i] = original + eps;
      const double plus = evaluate(loss_fn, registry);
      values[i] = original - eps;
      const double minus = evaluate(loss_fn, registry);
      values[i] = original;

      const double numeric = (plus - minus) / (2.0 * eps);
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric), kGradCheckFloor});
      const double rel = std::abs(analytic[i] - numeric) / denom;
      if (++result.checked == 1 || rel > result.max_relative_error) {
        result.max_relative_error = rel;
        result.worst_parameter = name;
        result.worst_index = i;
        result.analytic = analytic[i];
        result.numeric = numeric;
      }
    }
  }
  registry.zero_grad();
  return result;
}

}  // namespace docgat
