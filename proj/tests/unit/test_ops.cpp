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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "docgat/errors.hpp"
#include "docgat/grad_check.hpp"
#include "docgat/ops.hpp"
#include "helpers.hpp"

namespace docgat {
namespace {

using testing::random_tensor;

TEST(Tensor, FromDataChecksSize) {
  EXPECT_THROW(Tensor::from_data({2, 3}, {1.0, 2.0}), ShapeError);
  const auto t = Tensor::from_data({2, 2}, {1, 2, 3, 4});
  EXPECT_EQ(t.rows(), 2u);
  EXPECT_EQ(t.at(1, 0), 3.0);
}

TEST(Tensor, BackwardAccumulatesIntoLeaves) {
  auto x = Tensor::from_data({1, 2}, {1.0, -2.0}, true);
  sum(mul(x, x)).backward();
  sum(x).backward();
  EXPECT_DOUBLE_EQ(x.grad()[0], 2.0 * 1.0 + 1.0);
  EXPECT_DOUBLE_EQ(x.grad()[1], 2.0 * -2.0 + 1.0);
}

TEST(Tensor, NoGradGuardStopsRecording) {
  auto x = Tensor::from_data({1, 1}, {3.0}, true);
  Tensor y;
  {
    NoGradGuard guard;
    y = mul(x, x);
  }
  EXPECT_FALSE(y.requires_grad());
  EXPECT_TRUE(mul(x, x).requires_grad());
}

TEST(Tensor, DetachBlocksGradient) {
  auto x = Tensor::from_data({1, 1}, {3.0}, true);
  auto y = add(mul(x.detach(), x), x);
  y.backward();
  EXPECT_DOUBLE_EQ(x.grad()[0], 3.0 + 1.0);
}

TEST(Ops, MatmulAgainstLoops) {
  std::mt19937_64 rng(1);
  const auto a = random_tensor({3, 5}, rng);
  const auto b = random_tensor({5, 4}, rng);
  const auto c = matmul(a, b);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < 5; ++k) s += a.at(i, k) * b.at(k, j);
      EXPECT_NEAR(c.at(i, j), s, 1e-12);
    }
  EXPECT_THROW(matmul(a, a), ShapeError);
}

TEST(Ops, BroadcastForms) {
  const auto a = Tensor::from_data({2, 3}, {1, 2, 3, 4, 5, 6});
  const auto row = Tensor::from_data({1, 3}, {10, 20, 30});
  const auto col = Tensor::from_data({2, 1}, {100, 200});
  EXPECT_EQ(add(a, row).at(1, 2), 36.0);
  EXPECT_EQ(add(a, col).at(1, 0), 204.0);
  EXPECT_EQ(mul(a, Tensor::scalar(2.0)).at(0, 1), 4.0);
  EXPECT_THROW(add(a, Tensor::zeros({3, 2})), ShapeError);
}

TEST(Ops, GeluAndSigmoidValues) {
  const auto x = Tensor::from_data({1, 3}, {1.0, 0.0, -1.0});
  const auto g = gelu(x);
  EXPECT_NEAR(g.at(0, 0), 0.841192, 1e-6);
  EXPECT_EQ(g.at(0, 1), 0.0);
  EXPECT_NEAR(g.at(0, 2), -0.158808, 1e-6);
  EXPECT_NEAR(sigmoid(x).at(0, 0), 1.0 / (1.0 + std::exp(-1.0)), 1e-15);
}

TEST(Ops, LayerNormRowsHaveZeroMeanUnitVariance) {
  std::mt19937_64 rng(2);
  const auto x = random_tensor({4, 6}, rng, 3.0);
  const auto y = layer_norm(x, Tensor::full({1, 6}, 1.0), Tensor::zeros({1, 6}));
  for (std::size_t r = 0; r < 4; ++r) {
    double m = 0.0, v = 0.0;
    for (std::size_t c = 0; c < 6; ++c) m += y.at(r, c) / 6.0;
    for (std::size_t c = 0; c < 6; ++c) v += (y.at(r, c) - m) * (y.at(r, c) - m) / 6.0;
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(v, 1.0, 1e-3);
  }
}

TEST(Ops, MaskedSoftmaxZeroesMaskedEntries) {
  BoolMatrix mask(2, 3, true);
  mask.set(0, 1, false);
  const auto s = masked_softmax(Tensor::from_data({2, 3}, {1, 1000, 2, 0, 0, 0}), mask);
  EXPECT_EQ(s.at(0, 1), 0.0);
  EXPECT_NEAR(s.at(0, 0) + s.at(0, 2), 1.0, 1e-15);
  EXPECT_NEAR(s.at(0, 2) / s.at(0, 0), std::exp(1.0), 1e-12);
  EXPECT_NEAR(s.at(1, 0), 1.0 / 3.0, 1e-15);

  BoolMatrix empty_row(1, 2, false);
  EXPECT_THROW(masked_softmax(Tensor::zeros({1, 2}), empty_row), NumericError);
  BoolMatrix full(1, 2, true);
  EXPECT_THROW(masked_softmax(Tensor::from_data({1, 2}, {NAN, 0.0}), full), NumericError);
}

TEST(Ops, SmoothL1Values) {
  EXPECT_EQ(smooth_l1(Tensor::scalar(0.0)).item(), 0.0);
  EXPECT_DOUBLE_EQ(smooth_l1(Tensor::scalar(0.5)).item(), 0.125);
  EXPECT_DOUBLE_EQ(smooth_l1(Tensor::scalar(2.0)).item(), 1.5);
  EXPECT_DOUBLE_EQ(smooth_l1(Tensor::scalar(-2.0)).item(), 1.5);
  EXPECT_DOUBLE_EQ(smooth_l1(Tensor::from_data({1, 2}, {0.5, 2.0})).item(), (0.125 + 1.5) / 2.0);
}

TEST(Ops, CrossEntropyUniformAndOracle) {
  const std::vector<std::size_t> label{2};
  EXPECT_NEAR(cross_entropy(Tensor::zeros({1, 4}), label).item(), std::log(4.0), 1e-15);

  std::mt19937_64 rng(3);
  const auto logits = random_tensor({5, 7}, rng, 4.0);
  const std::vector<std::size_t> labels{0, 6, 3, 3, 1};
  double expected = 0.0;
  for (std::size_t r = 0; r < 5; ++r) {
    double mx = -INFINITY;
    for (std::size_t c = 0; c < 7; ++c) mx = std::max(mx, logits.at(r, c));
    double z = 0.0;
    for (std::size_t c = 0; c < 7; ++c) z += std::exp(logits.at(r, c) - mx);
    expected += (mx + std::log(z) - logits.at(r, labels[r])) / 5.0;
  }
  EXPECT_NEAR(cross_entropy(logits, labels).item(), expected, 1e-12);

  const auto confident = Tensor::from_data({1, 3}, {500.0, 0.0, 0.0});
  EXPECT_LT(cross_entropy(confident, std::vector<std::size_t>{0}).item(), 1e-200);
  EXPECT_THROW(cross_entropy(logits, std::vector<std::size_t>{0, 7, 0, 0, 0}), DataError);
}

TEST(Ops, ScatterAndGather) {
  const auto values = Tensor::from_data({3, 1}, {1, 2, 3});
  const std::vector<std::size_t> rows{0, 1, 1}, cols{2, 0, 1};
  const auto m = scatter_to_matrix(values, rows, cols, 2, 3);
  EXPECT_EQ(m.at(0, 2), 1.0);
  EXPECT_EQ(m.at(1, 1), 3.0);
  EXPECT_EQ(m.at(0, 0), 0.0);
  const std::vector<std::size_t> idx{1, 1, 0};
  const auto g = gather_rows(Tensor::from_data({2, 2}, {1, 2, 3, 4}), idx);
  EXPECT_EQ(g.at(0, 1), 4.0);
  EXPECT_EQ(g.at(2, 0), 1.0);
}

// Every differentiable op through one composite loss, judged by central
// differences.
TEST(Ops, CompositeGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  ParameterRegistry reg;
  reg.add("a", random_tensor({3, 4}, rng, 1.0, true));
  reg.add("b", random_tensor({4, 4}, rng, 0.5, true));
  reg.add("g", random_tensor({1, 4}, rng, 1.0, true));
  reg.add("t", random_tensor({5, 4}, rng, 1.0, true));
  reg.add("c", random_tensor({4, 1}, rng, 1.0, true));
  BoolMatrix mask(3, 3, true);
  mask.set(0, 2, false);
  mask.set(2, 1, false);
  const std::vector<std::size_t> idx{4, 0, 4};
  const std::vector<std::size_t> labels{1, 3, 0};
  const std::vector<std::size_t> pr{0, 1, 2}, pc{1, 2, 0};

  auto loss = [&](const ParameterRegistry& p) {
    auto h = matmul(p.at("a"), p.at("b"));
    h = layer_norm(h, p.at("g"), Tensor::zeros({1, 4}));
    h = add(h, embedding_lookup(p.at("t"), idx));
    auto attn = masked_softmax(add(matmul(h, transpose(h)),
                                   scatter_to_matrix(slice(matmul(h, p.at("c")), 0, 0, 3), pr, pc, 3, 3)),
                               mask);
    auto z = concat({matmul(attn, h), sigmoid(h)}, 1);
    z = gelu(sub(z, scale(gather_rows(z, std::vector<std::size_t>{2, 1, 0}), 0.5)));
    auto logits = slice(z, 1, 2, 6);
    return add(add(cross_entropy(logits, labels), smooth_l1(mul(z, z))), mean(row_sum(add_scalar(z, 1.0))));
  };
  const auto r = grad_check(loss, reg, 1e-5);
  EXPECT_EQ(r.checked, reg.element_count());
  EXPECT_LT(r.max_relative_error, 1e-6) << r.worst_parameter << "[" << r.worst_index << "]";
}

TEST(GradCheck, RejectsBadEpsAndRestoresValues) {
  ParameterRegistry reg;
  reg.add("w", Tensor::from_data({1, 2}, {0.3, -0.7}, true));
  auto loss = [](const ParameterRegistry& p) { return sum(mul(p.at("w"), p.at("w"))); };
  EXPECT_THROW(grad_check(loss, reg, 1e-2), std::invalid_argument);
  EXPECT_THROW(grad_check(loss, reg, 1e-9), std::invalid_argument);
  grad_check(loss, reg, 1e-5);
  EXPECT_EQ(reg.at("w").data()[0], 0.3);
  EXPECT_EQ(reg.at("w").data()[1], -0.7);
}

TEST(GradCheck, DetectsAWrongGradient) {
  // A loss whose recorded graph disagrees with its value: the value uses
  // x^2 but the gradient path sees only x.
  ParameterRegistry reg;
  reg.add("w", Tensor::from_data({1, 1}, {2.0}, true));
  auto loss = [](const ParameterRegistry& p) {
    const auto& w = p.at("w");
    return add(w, sub(mul(w, w.detach()), w.detach()));
  };
  // analytic 3, numeric 4
  EXPECT_NEAR(grad_check(loss, reg, 1e-5).max_relative_error, 0.25, 1e-6);
}

}  // namespace
}  // namespace docgat
