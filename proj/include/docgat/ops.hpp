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
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "docgat/tensor.hpp"

namespace docgat {

/// Row-major boolean matrix used as an attention mask.
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(std::size_t rows, std::size_t cols, bool value = false)
      : rows_(rows), cols_(cols), bits_(rows * cols, value ? 1 : 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool operator()(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c, bool value) { bits_[r * cols_ + c] = value ? 1 : 0; }
  std::size_t row_count(std::size_t r) const;
  bool all() const;

  friend bool operator==(const BoolMatrix&, const BoolMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

// All ops operate on rank-2 tensors. A scalar is a 1x1 tensor.
//
// Binary elementwise ops broadcast `b` when it is [1 x c] (row), [r x 1]
// (column) or [1 x 1]; no other broadcasting is supported.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double value);

Tensor sigmoid(const Tensor& a);
// tanh approximation: 0.5 x (1 + tanh(sqrt(2/pi) (x + 0.044715 x^3)))
Tensor gelu(const Tensor& a);

inline constexpr double kLayerNormEps = 1e-5;
// Normalizes each row; gamma and beta are [1 x cols].
Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta,
                  double eps = kLayerNormEps);

Tensor embedding_lookup(const Tensor& table, std::span<const std::size_t> indices);

// axis 0 stacks rows, axis 1 joins columns.
Tensor concat(std::span<const Tensor> parts, int axis);
Tensor concat(std::initializer_list<Tensor> parts, int axis);
// Half-open range [begin, end) along `axis`.
Tensor slice(const Tensor& a, int axis, std::size_t begin, std::size_t end);
Tensor gather_rows(const Tensor& a, std::span<const std::size_t> indices);
// Places values[p] (a [P x 1] column) at (rows[p], cols[p]) of a zero
// [out_rows x out_cols] matrix. Positions must be distinct.
Tensor scatter_to_matrix(const Tensor& values, std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols, std::size_t out_rows,
                         std::size_t out_cols);

Tensor row_sum(const Tensor& a);  // [r x c] -> [r x 1]
Tensor sum(const Tensor& a);      // -> [1 x 1]
Tensor mean(const Tensor& a);     // -> [1 x 1]

// Row-wise softmax over the entries where mask is true. Masked entries are
// excluded from the normalizer and are exactly zero in the output. Throws
// NumericError for a row with no permitted entry.
Tensor masked_softmax(const Tensor& scores, const BoolMatrix& mask);

// Mean over all components of 0.5 x^2 (|x| < 1) or |x| - 0.5 (beta = 1).
Tensor smooth_l1(const Tensor& x);

// Mean over rows of -log softmax(logits[r])[labels[r]].
Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> labels);

}  // namespace docgat
