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
#include <functional>
#include <string>

#include "docgat/registry.hpp"

namespace docgat {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
  std::size_t checked = 0;
};

// Denominator floor for the relative error, so components whose true
// gradient is ~0 are judged on absolute error instead.
inline constexpr double kGradCheckFloor = 1e-6;

/// Compares reverse-mode gradients of the scalar `loss_fn` against central
/// differences (f(x+eps) - f(x-eps)) / 2eps, one parameter component at a
/// time. Relative error is |a - n| / max(|a|, |n|, kGradCheckFloor).
/// Parameters are restored on return. Throws NumericError on a non-finite
/// loss and std::invalid_argument when eps is outside (1e-8, 1e-3).
GradCheckResult grad_check(const std::function<Tensor(const ParameterRegistry&)>& loss_fn,
                           ParameterRegistry& registry, double eps);

}  // namespace docgat
