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

#include "docgat/ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "docgat/errors.hpp"

namespace docgat {

std::size_t BoolMatrix::row_count(std::size_t r) const {
  return static_cast<std::size_t>(
      std::count(bits_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                 bits_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_), std::uint8_t{1}));
}

bool BoolMatrix::all() const {
  return std::all_of(bits_.begin(), bits_.end(), [](std::uint8_t b) { return b != 0; });
}

namespace {

using detail::Node;
using Backward = std::function<void(Node&)>;

Tensor make_op(Shape shape, std::vector<double> data, std::initializer_list<const Tensor*> inputs,
               Backward backward) {
  auto node = std::make_shared<Node>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  if (grad_enabled()) {
    bool any = false;
    for (const auto* t : inputs) any = any || t->requires_grad();
    if (any) {
      node->requires_grad = true;
      for (const auto* t : inputs) node->parents.push_back(t->node());
      node->backward = std::move(backward);
    }
  }
  return Tensor::wrap(std::move(node));
}

// Parent gradient buffer, or nullptr when that parent takes no gradient.
double* grad_of(Node& self, std::size_t i) {
  Node& p = *self.parents[i];
  if (!p.requires_grad) return nullptr;
  p.ensure_grad();
  return p.grad.data();
}

void require_rank2(const Tensor& t, const char* op) {
  if (t.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected a rank-2 tensor, got " + shape_to_string(t.shape()));
  }
}

enum class Broadcast { same, row, col, scalar };

Broadcast broadcast_kind(const Tensor& a, const Tensor& b, const char* op) {
  require_rank2(a, op);
  require_rank2(b, op);
  const auto r = a.rows(), c = a.cols();
  if (b.rows() == r && b.cols() == c) return Broadcast::same;
  if (b.rows() == 1 && b.cols() == 1) return Broadcast::scalar;
  if (b.rows() == 1 && b.cols() == c) return Broadcast::row;
  if (b.rows() == r && b.cols() == 1) return Broadcast::col;
  throw ShapeError(std::string(op) + ": cannot broadcast " + shape_to_string(b.shape()) + " onto " +
                   shape_to_string(a.shape()));
}

inline std::size_t bindex(Broadcast kind, std::size_t r, std::size_t c, std::size_t cols) {
  switch (kind) {
    case Broadcast::same: return r * cols + c;
    case Broadcast::row: return c;
    case Broadcast::col: return r;
    case Broadcast::scalar: return 0;
  }
  return 0;
}

template <typename Fwd, typename DA, typename DB>
Tensor binary(const Tensor& a, const Tensor& b, const char* name, Fwd fwd, DA da, DB db) {
  const auto kind = broadcast_kind(a, b, name);
  const auto r = a.rows(), c = a.cols();
  auto ad = a.data();
  auto bd = b.data();
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = fwd(ad[i * c + j], bd[bindex(kind, i, j, c)]);
  return make_op({r, c}, std::move(out), {&a, &b}, [kind, r, c, da, db](Node& self) {
    const auto& ad = self.parents[0]->data;
    const auto& bd = self.parents[1]->data;
    double* ga = grad_of(self, 0);
    double* gb = grad_of(self, 1);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) {
        const auto ia = i * c + j;
        const auto ib = bindex(kind, i, j, c);
        const double g = self.grad[ia];
        if (ga) ga[ia] += g * da(ad[ia], bd[ib]);
        if (gb) gb[ib] += g * db(ad[ia], bd[ib]);
      }
    }
  });
}

template <typename Fwd, typename Deriv>
Tensor unary(const Tensor& a, Fwd fwd, Deriv deriv) {
  auto ad = a.data();
  std::vector<double> out(ad.size());
  for (std::size_t i = 0; i < ad.size(); ++i) out[i] = fwd(ad[i]);
  return make_op(a.shape(), std::move(out), {&a}, [deriv](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    const auto& x = self.parents[0]->data;
    for (std::size_t i = 0; i < x.size(); ++i) ga[i] += self.grad[i] * deriv(x[i], self.data[i]);
  });
}

// Accumulates c[m x n] += a[m x k] * b[k x n] with optional transposes of
// the stored operands.
void gemm_acc(const double* a, bool ta, const double* b, bool tb, double* c, std::size_t m, std::size_t k,
              std::size_t n) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = ta ? a[p * m + i] : a[i * k + p];
      if (av == 0.0) continue;
      if (tb) {
        for (std::size_t j = 0; j < n; ++j) crow[j] += av * b[j * k + p];
      } else {
        const double* brow = b + p * n;
        for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
  }
}

}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
  require_rank2(a, "matmul");
  require_rank2(b, "matmul");
  const auto m = a.rows(), k = a.cols(), n = b.cols();
  if (b.rows() != k) {
    throw ShapeError("matmul: inner dimensions differ for " + shape_to_string(a.shape()) + " and " +
                     shape_to_string(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  gemm_acc(a.data().data(), false, b.data().data(), false, out.data(), m, k, n);
  return make_op({m, n}, std::move(out), {&a, &b}, [m, k, n](Node& self) {
    const double* ad = self.parents[0]->data.data();
    const double* bd = self.parents[1]->data.data();
    // dA = dC * B^T, dB = A^T * dC
    if (double* ga = grad_of(self, 0)) gemm_acc(self.grad.data(), false, bd, true, ga, m, n, k);
    if (double* gb = grad_of(self, 1)) gemm_acc(ad, true, self.grad.data(), false, gb, k, m, n);
  });
}

Tensor transpose(const Tensor& a) {
  require_rank2(a, "transpose");
  const auto r = a.rows(), c = a.cols();
  auto ad = a.data();
  std::vector<double> out(r * c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = ad[i * c + j];
  return make_op({c, r}, std::move(out), {&a}, [r, c](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += self.grad[j * r + i];
  });
}

Tensor add(const Tensor& a, const Tensor& b) {
  return binary(
      a, b, "add", [](double x, double y) { return x + y; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
}

Tensor sub(const Tensor& a, const Tensor& b) {
  return binary(
      a, b, "sub", [](double x, double y) { return x - y; }, [](double, double) { return 1.0; },
      [](double, double) { return -1.0; });
}

Tensor mul(const Tensor& a, const Tensor& b) {
  return binary(
      a, b, "mul", [](double x, double y) { return x * y; }, [](double, double y) { return y; },
      [](double x, double) { return x; });
}

Tensor scale(const Tensor& a, double factor) {
  return unary(
      a, [factor](double x) { return x * factor; }, [factor](double, double) { return factor; });
}

Tensor add_scalar(const Tensor& a, double value) {
  return unary(
      a, [value](double x) { return x + value; }, [](double, double) { return 1.0; });
}

Tensor sigmoid(const Tensor& a) {
  return unary(
      a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor gelu(const Tensor& a) {
  static constexpr double kC = 0.7978845608028654;  // sqrt(2/pi)
  static constexpr double kA = 0.044715;
  return unary(
      a,
      [](double x) { return 0.5 * x * (1.0 + std::tanh(kC * (x + kA * x * x * x))); },
      [](double x, double) {
        const double t = std::tanh(kC * (x + kA * x * x * x));
        return 0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * kC * (1.0 + 3.0 * kA * x * x);
      });
}

Tensor layer_norm(const Tensor& x, const Tensor& gamma, const Tensor& beta, double eps) {
  require_rank2(x, "layer_norm");
  const auto r = x.rows(), c = x.cols();
  if (gamma.numel() != c || beta.numel() != c) {
    throw ShapeError("layer_norm: scale/shift must have " + std::to_string(c) + " elements");
  }
  auto xd = x.data();
  auto gd = gamma.data();
  auto bd = beta.data();
  std::vector<double> out(r * c);
  std::vector<double> normalized(r * c);
  std::vector<double> inv_std(r);
  for (std::size_t i = 0; i < r; ++i) {
    double mu = 0.0;
    for (std::size_t j = 0; j < c; ++j) mu += xd[i * c + j];
    mu /= static_cast<double>(c);
    double var = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double dv = xd[i * c + j] - mu;
      var += dv * dv;
    }
    var /= static_cast<double>(c);
    inv_std[i] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < c; ++j) {
      const double xh = (xd[i * c + j] - mu) * inv_std[i];
      normalized[i * c + j] = xh;
      out[i * c + j] = xh * gd[j] + bd[j];
    }
  }
  return make_op({r, c}, std::move(out), {&x, &gamma, &beta},
                 [r, c, normalized = std::move(normalized), inv_std = std::move(inv_std)](Node& self) {
                   const auto& gd = self.parents[1]->data;
                   double* gx = grad_of(self, 0);
                   double* gg = grad_of(self, 1);
                   double* gb = grad_of(self, 2);
                   const double inv_c = 1.0 / static_cast<double>(c);
                   for (std::size_t i = 0; i < r; ++i) {
                     double mean_g = 0.0, mean_gx = 0.0;
                     for (std::size_t j = 0; j < c; ++j) {
                       const double dy = self.grad[i * c + j];
                       const double xh = normalized[i * c + j];
                       if (gg) gg[j] += dy * xh;
                       if (gb) gb[j] += dy;
                       const double g = dy * gd[j];
                       mean_g += g;
                       mean_gx += g * xh;
                     }
                     if (!gx) continue;
                     mean_g *= inv_c;
                     mean_gx *= inv_c;
                     for (std::size_t j = 0; j < c; ++j) {
                       const double g = self.grad[i * c + j] * gd[j];
                       gx[i * c + j] += inv_std[i] * (g - mean_g - normalized[i * c + j] * mean_gx);
                     }
                   }
                 });
}

Tensor embedding_lookup(const Tensor& table, std::span<const std::size_t> indices) {
  require_rank2(table, "embedding_lookup");
  if (indices.empty()) throw ShapeError("embedding_lookup: no indices");
  const auto rows = table.rows(), w = table.cols();
  auto td = table.data();
  std::vector<double> out(indices.size() * w);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows) {
      throw ShapeError("embedding_lookup: index " + std::to_string(indices[i]) + " outside table of " +
                       std::to_string(rows) + " rows");
    }
    std::copy_n(td.begin() + static_cast<std::ptrdiff_t>(indices[i] * w), w, out.begin() + static_cast<std::ptrdiff_t>(i * w));
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return make_op({indices.size(), w}, std::move(out), {&table}, [idx = std::move(idx), w](Node& self) {
    double* gt = grad_of(self, 0);
    if (!gt) return;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < w; ++j) gt[idx[i] * w + j] += self.grad[i * w + j];
  });
}

Tensor concat(std::initializer_list<Tensor> parts, int axis) {
  return concat(std::span<const Tensor>(parts.begin(), parts.size()), axis);
}

Tensor concat(std::span<const Tensor> parts, int axis) {
  if (parts.empty()) throw ShapeError("concat: no inputs");
  if (axis != 0 && axis != 1) throw ShapeError("concat: axis " + std::to_string(axis) + " out of range");
  for (const auto& p : parts) require_rank2(p, "concat");
  const auto r0 = parts[0].rows(), c0 = parts[0].cols();
  std::size_t total = 0;
  for (const auto& p : parts) {
    if (axis == 0 ? p.cols() != c0 : p.rows() != r0) {
      throw ShapeError("concat: incompatible shapes " + shape_to_string(parts[0].shape()) + " and " +
                       shape_to_string(p.shape()));
    }
    total += axis == 0 ? p.rows() : p.cols();
  }
  const std::size_t out_r = axis == 0 ? total : r0;
  const std::size_t out_c = axis == 0 ? c0 : total;
  std::vector<double> out(out_r * out_c);
  std::vector<std::size_t> offsets;
  std::size_t offset = 0;
  for (const auto& p : parts) {
    offsets.push_back(offset);
    auto pd = p.data();
    const auto pr = p.rows(), pc = p.cols();
    for (std::size_t i = 0; i < pr; ++i)
      for (std::size_t j = 0; j < pc; ++j) {
        const auto oi = axis == 0 ? i + offset : i;
        const auto oj = axis == 0 ? j : j + offset;
        out[oi * out_c + oj] = pd[i * pc + j];
      }
    offset += axis == 0 ? pr : pc;
  }

  auto node = std::make_shared<Node>();
  node->shape = {out_r, out_c};
  node->data = std::move(out);
  bool any = false;
  for (const auto& p : parts) any = any || p.requires_grad();
  if (grad_enabled() && any) {
    node->requires_grad = true;
    for (const auto& p : parts) node->parents.push_back(p.node());
    node->backward = [axis, out_c, offsets = std::move(offsets)](Node& self) {
      for (std::size_t k = 0; k < self.parents.size(); ++k) {
        double* gp = grad_of(self, k);
        if (!gp) continue;
        const auto pr = self.parents[k]->shape[0], pc = self.parents[k]->shape[1];
        for (std::size_t i = 0; i < pr; ++i)
          for (std::size_t j = 0; j < pc; ++j) {
            const auto oi = axis == 0 ? i + offsets[k] : i;
            const auto oj = axis == 0 ? j : j + offsets[k];
            gp[i * pc + j] += self.grad[oi * out_c + oj];
          }
      }
    };
  }
  return Tensor::wrap(std::move(node));
}

Tensor slice(const Tensor& a, int axis, std::size_t begin, std::size_t end) {
  require_rank2(a, "slice");
  if (axis != 0 && axis != 1) throw ShapeError("slice: axis " + std::to_string(axis) + " out of range");
  const auto r = a.rows(), c = a.cols();
  const auto extent = axis == 0 ? r : c;
  if (begin >= end || end > extent) {
    throw ShapeError("slice: range [" + std::to_string(begin) + ", " + std::to_string(end) +
                     ") invalid for " + shape_to_string(a.shape()));
  }
  const auto out_r = axis == 0 ? end - begin : r;
  const auto out_c = axis == 0 ? c : end - begin;
  const auto row0 = axis == 0 ? begin : 0;
  const auto col0 = axis == 0 ? 0 : begin;
  auto ad = a.data();
  std::vector<double> out(out_r * out_c);
  for (std::size_t i = 0; i < out_r; ++i)
    for (std::size_t j = 0; j < out_c; ++j) out[i * out_c + j] = ad[(i + row0) * c + j + col0];
  return make_op({out_r, out_c}, std::move(out), {&a}, [=](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < out_r; ++i)
      for (std::size_t j = 0; j < out_c; ++j) ga[(i + row0) * c + j + col0] += self.grad[i * out_c + j];
  });
}

Tensor gather_rows(const Tensor& a, std::span<const std::size_t> indices) {
  require_rank2(a, "gather_rows");
  if (indices.empty()) throw ShapeError("gather_rows: no indices");
  const auto r = a.rows(), c = a.cols();
  auto ad = a.data();
  std::vector<double> out(indices.size() * c);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= r) {
      throw ShapeError("gather_rows: row " + std::to_string(indices[i]) + " outside " + shape_to_string(a.shape()));
    }
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] = ad[indices[i] * c + j];
  }
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  return make_op({indices.size(), c}, std::move(out), {&a}, [idx = std::move(idx), c](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < c; ++j) ga[idx[i] * c + j] += self.grad[i * c + j];
  });
}

Tensor scatter_to_matrix(const Tensor& values, std::span<const std::size_t> rows, std::span<const std::size_t> cols,
                         std::size_t out_rows, std::size_t out_cols) {
  require_rank2(values, "scatter_to_matrix");
  const auto p = values.numel();
  if (values.cols() != 1 || rows.size() != p || cols.size() != p) {
    throw ShapeError("scatter_to_matrix: expected a [P x 1] column matching " + std::to_string(rows.size()) +
                     " positions, got " + shape_to_string(values.shape()));
  }
  std::vector<std::size_t> flat(p);
  std::vector<double> out(out_rows * out_cols, 0.0);
  auto vd = values.data();
  for (std::size_t k = 0; k < p; ++k) {
    if (rows[k] >= out_rows || cols[k] >= out_cols) throw ShapeError("scatter_to_matrix: position out of range");
    flat[k] = rows[k] * out_cols + cols[k];
    out[flat[k]] = vd[k];
  }
  return make_op({out_rows, out_cols}, std::move(out), {&values}, [flat = std::move(flat)](Node& self) {
    double* gv = grad_of(self, 0);
    if (!gv) return;
    for (std::size_t k = 0; k < flat.size(); ++k) gv[k] += self.grad[flat[k]];
  });
}

Tensor row_sum(const Tensor& a) {
  require_rank2(a, "row_sum");
  const auto r = a.rows(), c = a.cols();
  auto ad = a.data();
  std::vector<double> out(r, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[i] += ad[i * c + j];
  return make_op({r, 1}, std::move(out), {&a}, [r, c](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) ga[i * c + j] += self.grad[i];
  });
}

Tensor sum(const Tensor& a) {
  double total = 0.0;
  for (double v : a.data()) total += v;
  return make_op({1, 1}, {total}, {&a}, [](Node& self) {
    double* ga = grad_of(self, 0);
    if (!ga) return;
    const auto n = self.parents[0]->data.size();
    for (std::size_t i = 0; i < n; ++i) ga[i] += self.grad[0];
  });
}

Tensor mean(const Tensor& a) { return scale(sum(a), 1.0 / static_cast<double>(a.numel())); }

Tensor masked_softmax(const Tensor& scores, const BoolMatrix& mask) {
  require_rank2(scores, "masked_softmax");
  const auto r = scores.rows(), c = scores.cols();
  if (mask.rows() != r || mask.cols() != c) {
    throw ShapeError("masked_softmax: mask [" + std::to_string(mask.rows()) + "x" + std::to_string(mask.cols()) +
                     "] does not match scores " + shape_to_string(scores.shape()));
  }
  auto sd = scores.data();
  std::vector<double> out(r * c, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t j = 0; j < c; ++j) {
      if (!mask(i, j)) continue;
      any = true;
      if (!std::isfinite(sd[i * c + j])) {
        throw NumericError("masked_softmax: non-finite score at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
      }
      mx = std::max(mx, sd[i * c + j]);
    }
    if (!any) throw NumericError("masked_softmax: row " + std::to_string(i) + " has no permitted entry");
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      if (!mask(i, j)) continue;
      const double e = std::exp(sd[i * c + j] - mx);
      out[i * c + j] = e;
      z += e;
    }
    for (std::size_t j = 0; j < c; ++j) out[i * c + j] /= z;
  }
  return make_op({r, c}, std::move(out), {&scores}, [r, c](Node& self) {
    double* gs = grad_of(self, 0);
    if (!gs) return;
    for (std::size_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < c; ++j) dot += self.data[i * c + j] * self.grad[i * c + j];
      for (std::size_t j = 0; j < c; ++j) {
        const double p = self.data[i * c + j];
        if (p != 0.0) gs[i * c + j] += p * (self.grad[i * c + j] - dot);
      }
    }
  });
}

Tensor smooth_l1(const Tensor& x) {
  auto xd = x.data();
  double total = 0.0;
  for (double v : xd) {
    const double a = std::abs(v);
    total += a < 1.0 ? 0.5 * v * v : a - 0.5;
  }
  const double inv_n = 1.0 / static_cast<double>(xd.size());
  return make_op({1, 1}, {total * inv_n}, {&x}, [inv_n](Node& self) {
    double* gx = grad_of(self, 0);
    if (!gx) return;
    const auto& xv = self.parents[0]->data;
    for (std::size_t i = 0; i < xv.size(); ++i) {
      const double v = xv[i];
      const double d = std::abs(v) < 1.0 ? v : (v > 0 ? 1.0 : -1.0);
      gx[i] += self.grad[0] * d * inv_n;
    }
  });
}

Tensor cross_entropy(const Tensor& logits, std::span<const std::size_t> labels) {
  require_rank2(logits, "cross_entropy");
  const auto r = logits.rows(), c = logits.cols();
  if (labels.size() != r) {
    throw ShapeError("cross_entropy: " + std::to_string(labels.size()) + " labels for " + std::to_string(r) + " rows");
  }
  auto ld = logits.data();
  std::vector<double> probs(r * c);
  double total = 0.0;
  for (std::size_t i = 0; i < r; ++i) {
    if (labels[i] >= c) {
      throw DataError("cross_entropy: label " + std::to_string(labels[i]) + " outside [0, " + std::to_string(c) + ")");
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < c; ++j) mx = std::max(mx, ld[i * c + j]);
    double z = 0.0;
    for (std::size_t j = 0; j < c; ++j) z += std::exp(ld[i * c + j] - mx);
    const double lse = mx + std::log(z);
    for (std::size_t j = 0; j < c; ++j) probs[i * c + j] = std::exp(ld[i * c + j] - lse);
    total += lse - ld[i * c + labels[i]];
  }
  const double inv_r = 1.0 / static_cast<double>(r);
  std::vector<std::size_t> lab(labels.begin(), labels.end());
  return make_op({1, 1}, {total * inv_r}, {&logits},
                 [r, c, inv_r, probs = std::move(probs), lab = std::move(lab)](Node& self) {
                   double* gl = grad_of(self, 0);
                   if (!gl) return;
                   const double g = self.grad[0] * inv_r;
                   for (std::size_t i = 0; i < r; ++i)
                     for (std::size_t j = 0; j < c; ++j)
                       gl[i * c + j] += g * (probs[i * c + j] - (j == lab[i] ? 1.0 : 0.0));
                 });
}

}  // namespace docgat
