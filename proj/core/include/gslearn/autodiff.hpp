/*
 * Copyright 2026 The gslearn Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "gslearn/matrix.hpp"
#include "gslearn/rng.hpp"

namespace gslearn {

class DiffNode;

/// Handle to a node of the differentiation graph.
///
/// Values are immutable once created (parameters are the exception: the
/// optimizer updates them in place between graph constructions). Each node
/// owns its parents, so a graph lives exactly as long as its output handle.
class Var {
 public:
  Var() = default;
  explicit Var(std::shared_ptr<DiffNode> node) : node_(std::move(node)) {}

  const Matrix& value() const;
  /// Gradient slot; same shape as value(). Zeros until a backward pass reaches it.
  const Matrix& grad() const;
  bool requires_grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }

  /// Parameters only: in-place value mutation (optimizer, checkpoint load).
  Matrix& mutable_value();
  Matrix& mutable_grad();
  void zero_grad();

  DiffNode* node() const noexcept { return node_.get(); }
  explicit operator bool() const noexcept { return static_cast<bool>(node_); }

 private:
  std::shared_ptr<DiffNode> node_;
};

/// Local-gradient rule: reads self.grad (d loss / d self) and accumulates into
/// the parents' gradient slots.
using BackwardFn = std::function<void(DiffNode& self)>;

class DiffNode {
 public:
  DiffNode(Matrix value, bool requires_grad) : value_(std::move(value)), requires_grad_(requires_grad) {}

  const Matrix& value() const noexcept { return value_; }
  Matrix& value() noexcept { return value_; }
  Matrix& grad();
  const Matrix& grad() const;
  bool requires_grad() const noexcept { return requires_grad_; }

  std::span<const Var> parents() const noexcept { return parents_; }
  /// Accumulates into parent i's gradient if that parent requires it.
  void accumulate_parent(std::size_t i, const Matrix& g);
  Matrix& parent_grad(std::size_t i);
  bool parent_requires_grad(std::size_t i) const { return parents_[i].requires_grad(); }

 private:
  friend Var make_op(Matrix, std::vector<Var>, BackwardFn);
  friend void backward(const Var&);

  Matrix value_;
  mutable Matrix grad_;
  bool requires_grad_;
  std::vector<Var> parents_;
  BackwardFn backward_;
};

/// Leaf without gradient.
Var constant(Matrix value);
/// Leaf that collects gradients.
Var parameter(Matrix value);
/// Interior node. requires_grad is inherited from the parents; when no parent
/// requires it the rule is dropped and no gradient memory is ever allocated.
Var make_op(Matrix value, std::vector<Var> parents, BackwardFn rule);

/// Reverse sweep from a 1x1 loss. Interior gradients are reset at the start of
/// each call; leaf (parameter) gradients accumulate across calls until zeroed.
void backward(const Var& loss);

// ---- differentiable operations -------------------------------------------

Var matmul(const Var& a, const Var& b);
/// a * b^T
Var matmul_nt(const Var& a, const Var& b);

Var add(const Var& a, const Var& b);
Var sub(const Var& a, const Var& b);
Var mul(const Var& a, const Var& b);
Var scale(const Var& a, double factor);
/// a + 1 * bias, bias is 1 x cols.
Var add_row_vector(const Var& a, const Var& bias);
/// alpha * a + beta * b
Var mix(const Var& a, double alpha, const Var& b, double beta);

Var relu(const Var& a);
Var sigmoid(const Var& a);
Var exp(const Var& a);
/// log(max(x, 1e-12)); the clamp keeps probabilities that underflow finite.
Var log(const Var& a);

/// Sum of all entries, 1x1.
Var sum(const Var& a);

/// Row-wise softmax with per-row max subtraction.
Var softmax_rows(const Var& a);

struct NormalizeOptions {
  /// 0 means strict: an all-zero row raises NormalizationError. A positive
  /// value divides by max(norm, min_norm) instead, so zero rows stay zero.
  double min_norm = 0.0;
};
Var row_l2_normalize(const Var& a, NormalizeOptions options = {});

/// Inverted dropout. The mask drawn in forward is reused in backward.
Var dropout(const Var& a, double p, Rng& rng, bool training);

/// Mean over `rows` of -log softmax(logits)[label].
Var cross_entropy(const Var& logits, std::span<const int> labels,
                  std::span<const std::size_t> rows);

/// i.i.d. standard Gumbel samples drawn row-major from rng.
Matrix gumbel_noise(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace gslearn
