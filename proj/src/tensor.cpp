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

#include "docgat/tensor.hpp"

#include <numeric>
#include <sstream>
#include <unordered_set>

#include "docgat/errors.hpp"

namespace docgat {

std::size_t shape_numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

namespace {

void validate_shape(const Shape& shape) {
  if (shape.empty()) throw ShapeError("tensor shape must have at least one dimension");
  for (auto dim : shape) {
    if (dim == 0) throw ShapeError("tensor shape " + shape_to_string(shape) + " has a zero dimension");
  }
}

}  // namespace

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  validate_shape(shape);
  auto node = std::make_shared<detail::Node>();
  node->data.assign(shape_numel(shape), value);
  node->shape = std::move(shape);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::from_data(Shape shape, std::vector<double> data, bool requires_grad) {
  validate_shape(shape);
  if (shape_numel(shape) != data.size()) {
    throw ShapeError("shape " + shape_to_string(shape) + " does not match " + std::to_string(data.size()) +
                     " values");
  }
  auto node = std::make_shared<detail::Node>();
  node->shape = std::move(shape);
  node->data = std::move(data);
  node->requires_grad = requires_grad;
  return Tensor(std::move(node));
}

Tensor Tensor::scalar(double value) { return from_data({1, 1}, {value}); }

Tensor Tensor::wrap(std::shared_ptr<detail::Node> node) { return Tensor(std::move(node)); }

const detail::Node& Tensor::checked() const {
  if (!node_) throw Error("use of an undefined tensor");
  return *node_;
}

detail::Node& Tensor::checked() {
  if (!node_) throw Error("use of an undefined tensor");
  return *node_;
}

const Shape& Tensor::shape() const { return checked().shape; }
std::size_t Tensor::numel() const { return checked().data.size(); }
std::size_t Tensor::rows() const { return shape()[0]; }
std::size_t Tensor::cols() const { return rank() > 1 ? shape()[1] : 1; }

std::span<const double> Tensor::data() const { return checked().data; }
std::span<double> Tensor::mutable_data() { return checked().data; }

double Tensor::item() const {
  if (numel() != 1) throw ShapeError("item() on tensor of shape " + shape_to_string(shape()));
  return checked().data[0];
}

double Tensor::at(std::size_t r, std::size_t c) const { return checked().data[r * cols() + c]; }

bool Tensor::requires_grad() const { return checked().requires_grad; }
bool Tensor::has_grad() const { return !checked().grad.empty(); }
std::span<const double> Tensor::grad() const { return checked().grad; }

std::span<double> Tensor::mutable_grad() {
  checked().ensure_grad();
  return node_->grad;
}

void Tensor::zero_grad() {
  auto& n = checked();
  std::fill(n.grad.begin(), n.grad.end(), 0.0);
}

void Tensor::backward() const {
  const auto& root = checked();
  if (root.data.size() != 1) {
    throw ShapeError("backward() needs a single-element tensor, got " + shape_to_string(root.shape));
  }
  if (!root.requires_grad) return;

  // Iterative post-order DFS; reversing it gives a topological order with
  // the root first.
  std::vector<detail::Node*> order;
  std::unordered_set<detail::Node*> visited;
  std::vector<std::pair<detail::Node*, std::size_t>> stack{{node_.get(), 0}};
  visited.insert(node_.get());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents.size()) {
      detail::Node* parent = node->parents[next++].get();
      if (parent->requires_grad && visited.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (auto* node : order) {
    if (node->backward) node->grad.assign(node->data.size(), 0.0);
  }
  node_->ensure_grad();
  node_->grad[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward) (*it)->backward(**it);
  }
}

Tensor Tensor::detach() const {
  const auto& n = checked();
  return from_data(n.shape, n.data, false);
}

Tensor Tensor::clone() const {
  const auto& n = checked();
  return from_data(n.shape, n.data, n.requires_grad);
}

}  // namespace docgat
