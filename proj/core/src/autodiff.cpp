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

#include "gslearn/autodiff.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "gslearn/error.hpp"

namespace gslearn {
namespace {

constexpr double kLogFloor = 1e-12;

void require_same_shape(const char* op, const Var& a, const Var& b) {
  if (!a.value().same_shape(b.value())) {
    throw DimensionError(std::string(op) + ": shape mismatch " + a.value().shape_string() +
                         " vs " + b.value().shape_string());
  }
}

template <typename F>
Matrix map_values(const Matrix& in, F&& f) {
  Matrix out(in.rows(), in.cols());
  auto src = in.values();
  auto dst = out.values();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = f(src[i]);
  return out;
}

}  // namespace

// ---- Var / DiffNode -------------------------------------------------------

const Matrix& Var::value() const { return node_->value(); }
const Matrix& Var::grad() const { return node_->grad(); }
bool Var::requires_grad() const { return node_ && node_->requires_grad(); }
Matrix& Var::mutable_value() { return node_->value(); }
Matrix& Var::mutable_grad() { return node_->grad(); }
void Var::zero_grad() {
  if (node_) node_->grad().fill(0.0);
}

Matrix& DiffNode::grad() {
  if (!grad_.same_shape(value_)) grad_ = Matrix::zeros_like(value_);
  return grad_;
}

const Matrix& DiffNode::grad() const {
  if (!grad_.same_shape(value_)) grad_ = Matrix::zeros_like(value_);
  return grad_;
}

void DiffNode::accumulate_parent(std::size_t i, const Matrix& g) {
  if (parents_[i].requires_grad()) add_inplace(parents_[i].node()->grad(), g);
}

Matrix& DiffNode::parent_grad(std::size_t i) { return parents_[i].node()->grad(); }

Var constant(Matrix value) { return Var(std::make_shared<DiffNode>(std::move(value), false)); }

Var parameter(Matrix value) { return Var(std::make_shared<DiffNode>(std::move(value), true)); }

Var make_op(Matrix value, std::vector<Var> parents, BackwardFn rule) {
  const bool needs = std::any_of(parents.begin(), parents.end(),
                                 [](const Var& p) { return p.requires_grad(); });
  auto node = std::make_shared<DiffNode>(std::move(value), needs);
  if (needs) {
    node->parents_ = std::move(parents);
    node->backward_ = std::move(rule);
  }
  return Var(std::move(node));
}

void backward(const Var& loss) {
  if (!loss) throw ContractError("backward: empty loss handle");
  if (loss.rows() != 1 || loss.cols() != 1) {
    throw ContractError("backward: loss must be 1x1, got " + loss.value().shape_string());
  }
  if (!loss.requires_grad()) return;

  // Iterative post-order DFS gives a topological order (parents first).
  std::vector<DiffNode*> order;
  std::unordered_set<DiffNode*> seen;
  std::vector<std::pair<DiffNode*, std::size_t>> stack{{loss.node(), 0}};
  seen.insert(loss.node());
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (next < node->parents_.size()) {
      DiffNode* parent = node->parents_[next++].node();
      if (parent->requires_grad() && seen.insert(parent).second) stack.emplace_back(parent, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }

  for (DiffNode* node : order)
    if (node->backward_) node->grad().fill(0.0);
  loss.node()->grad()(0, 0) += 1.0;

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if ((*it)->backward_) (*it)->backward_(**it);
  }
}

// ---- linear algebra -------------------------------------------------------

Var matmul(const Var& a, const Var& b) {
  Matrix out = gslearn::matmul(a.value(), b.value());
  return make_op(std::move(out), {a, b}, [](DiffNode& self) {
    const Var& a = self.parents()[0];
    const Var& b = self.parents()[1];
    if (a.requires_grad()) self.accumulate_parent(0, matmul_nt(self.grad(), b.value()));
    if (b.requires_grad()) self.accumulate_parent(1, matmul_tn(a.value(), self.grad()));
  });
}

Var matmul_nt(const Var& a, const Var& b) {
  Matrix out = gslearn::matmul_nt(a.value(), b.value());
  return make_op(std::move(out), {a, b}, [](DiffNode& self) {
    const Var& a = self.parents()[0];
    const Var& b = self.parents()[1];
    if (a.requires_grad()) self.accumulate_parent(0, gslearn::matmul(self.grad(), b.value()));
    if (b.requires_grad()) self.accumulate_parent(1, matmul_tn(self.grad(), a.value()));
  });
}

// ---- elementwise ----------------------------------------------------------

Var add(const Var& a, const Var& b) {
  require_same_shape("add", a, b);
  Matrix out = a.value();
  add_inplace(out, b.value());
  return make_op(std::move(out), {a, b}, [](DiffNode& self) {
    self.accumulate_parent(0, self.grad());
    self.accumulate_parent(1, self.grad());
  });
}

Var sub(const Var& a, const Var& b) {
  require_same_shape("sub", a, b);
  Matrix out = a.value();
  axpy_inplace(out, -1.0, b.value());
  return make_op(std::move(out), {a, b}, [](DiffNode& self) {
    self.accumulate_parent(0, self.grad());
    if (self.parent_requires_grad(1)) axpy_inplace(self.parent_grad(1), -1.0, self.grad());
  });
}

Var mul(const Var& a, const Var& b) {
  require_same_shape("mul", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.values()[i] = a.value().values()[i] * b.value().values()[i];
  return make_op(std::move(out), {a, b}, [](DiffNode& self) {
    const auto g = self.grad().values();
    for (std::size_t p = 0; p < 2; ++p) {
      if (!self.parent_requires_grad(p)) continue;
      const auto other = self.parents()[1 - p].value().values();
      auto dst = self.parent_grad(p).values();
      for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * other[i];
    }
  });
}

Var scale(const Var& a, double factor) {
  Matrix out = map_values(a.value(), [factor](double x) { return factor * x; });
  return make_op(std::move(out), {a}, [factor](DiffNode& self) {
    axpy_inplace(self.parent_grad(0), factor, self.grad());
  });
}

Var mix(const Var& a, double alpha, const Var& b, double beta) {
  require_same_shape("mix", a, b);
  Matrix out = scale(a, alpha).value();
  axpy_inplace(out, beta, b.value());
  return make_op(std::move(out), {a, b}, [alpha, beta](DiffNode& self) {
    if (self.parent_requires_grad(0)) axpy_inplace(self.parent_grad(0), alpha, self.grad());
    if (self.parent_requires_grad(1)) axpy_inplace(self.parent_grad(1), beta, self.grad());
  });
}

Var add_row_vector(const Var& a, const Var& bias) {
  if (bias.rows() != 1 || bias.cols() != a.cols()) {
    throw DimensionError("add_row_vector: bias " + bias.value().shape_string() +
                         " does not broadcast over " + a.value().shape_string());
  }
  Matrix out = a.value();
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) r[j] += bias.value()(0, j);
  }
  return make_op(std::move(out), {a, bias}, [](DiffNode& self) {
    self.accumulate_parent(0, self.grad());
    if (self.parent_requires_grad(1)) {
      Matrix& db = self.parent_grad(1);
      const Matrix& g = self.grad();
      for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) db(0, j) += g(i, j);
    }
  });
}

Var relu(const Var& a) {
  Matrix out = map_values(a.value(), [](double x) { return x > 0.0 ? x : 0.0; });
  return make_op(std::move(out), {a}, [](DiffNode& self) {
    const auto x = self.parents()[0].value().values();
    const auto g = self.grad().values();
    auto dst = self.parent_grad(0).values();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > 0.0) dst[i] += g[i];
  });
}

Var sigmoid(const Var& a) {
  Matrix out = map_values(a.value(), [](double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
  });
  return make_op(std::move(out), {a}, [](DiffNode& self) {
    const auto y = self.value().values();
    const auto g = self.grad().values();
    auto dst = self.parent_grad(0).values();
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var exp(const Var& a) {
  Matrix out = map_values(a.value(), [](double x) { return std::exp(x); });
  return make_op(std::move(out), {a}, [](DiffNode& self) {
    const auto y = self.value().values();
    const auto g = self.grad().values();
    auto dst = self.parent_grad(0).values();
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * y[i];
  });
}

Var log(const Var& a) {
  Matrix out = map_values(a.value(), [](double x) { return std::log(std::max(x, kLogFloor)); });
  return make_op(std::move(out), {a}, [](DiffNode& self) {
    const auto x = self.parents()[0].value().values();
    const auto g = self.grad().values();
    auto dst = self.parent_grad(0).values();
    for (std::size_t i = 0; i < g.size(); ++i)
      if (x[i] > kLogFloor) dst[i] += g[i] / x[i];
  });
}

Var sum(const Var& a) {
  Matrix out(1, 1, gslearn::sum(a.value()));
  return make_op(std::move(out), {a}, [](DiffNode& self) {
    const double g = self.grad()(0, 0);
    for (double& d : self.parent_grad(0).values()) d += g;
  });
}

// ---- row-wise -------------------------------------------------------------

Var softmax_rows(const Var& a) {
  const Matrix& x = a.value();
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto in = x.row(i);
    auto y = out.row(i);
    if (in.empty()) continue;
    const double peak = *std::max_element(in.begin(), in.end());
    double total = 0.0;
    for (std::size_t j = 0; j < in.size(); ++j) {
      y[j] = std::exp(in[j] - peak);
      total += y[j];
    }
    for (double& v : y) v /= total;
  }
  return make_op(std::move(out), {a}, [](DiffNode& self) {
    const Matrix& y = self.value();
    const Matrix& g = self.grad();
    Matrix& dx = self.parent_grad(0);
    for (std::size_t i = 0; i < y.rows(); ++i) {
      const auto yr = y.row(i);
      const auto gr = g.row(i);
      double dot = 0.0;
      for (std::size_t j = 0; j < yr.size(); ++j) dot += yr[j] * gr[j];
      auto dr = dx.row(i);
      for (std::size_t j = 0; j < yr.size(); ++j) dr[j] += yr[j] * (gr[j] - dot);
    }
  });
}

Var row_l2_normalize(const Var& a, NormalizeOptions options) {
  const Matrix& x = a.value();
  Matrix out(x.rows(), x.cols());
  std::vector<double> divisor(x.rows());
  std::vector<char> clamped(x.rows(), 0);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto in = x.row(i);
    double sq = 0.0;
    for (double v : in) sq += v * v;
    const double norm = std::sqrt(sq);
    if (options.min_norm <= 0.0) {
      if (norm == 0.0) {
        throw NormalizationError(i, "row_l2_normalize: row " + std::to_string(i) +
                                        " has zero norm");
      }
      divisor[i] = norm;
    } else if (norm < options.min_norm) {
      divisor[i] = options.min_norm;
      clamped[i] = 1;
    } else {
      divisor[i] = norm;
    }
    auto y = out.row(i);
    for (std::size_t j = 0; j < in.size(); ++j) y[j] = in[j] / divisor[i];
  }
  return make_op(std::move(out), {a},
                 [divisor = std::move(divisor), clamped = std::move(clamped)](DiffNode& self) {
                   const Matrix& y = self.value();
                   const Matrix& g = self.grad();
                   Matrix& dx = self.parent_grad(0);
                   for (std::size_t i = 0; i < y.rows(); ++i) {
                     const auto yr = y.row(i);
                     const auto gr = g.row(i);
                     auto dr = dx.row(i);
                     double dot = 0.0;
                     if (!clamped[i])
                       for (std::size_t j = 0; j < yr.size(); ++j) dot += yr[j] * gr[j];
                     for (std::size_t j = 0; j < yr.size(); ++j)
                       dr[j] += (gr[j] - yr[j] * dot) / divisor[i];
                   }
                 });
}

Var dropout(const Var& a, double p, Rng& rng, bool training) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ConfigError("dropout: probability must lie in [0, 1), got " + std::to_string(p));
  }
  if (!training || p == 0.0) return a;
  const double keep_scale = 1.0 / (1.0 - p);
  Matrix mask(a.rows(), a.cols());
  for (double& m : mask.values()) m = rng.uniform() < p ? 0.0 : keep_scale;
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.values()[i] = a.value().values()[i] * mask.values()[i];
  return make_op(std::move(out), {a}, [mask = std::move(mask)](DiffNode& self) {
    const auto g = self.grad().values();
    auto dst = self.parent_grad(0).values();
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i] * mask.values()[i];
  });
}

Var cross_entropy(const Var& logits, std::span<const int> labels,
                  std::span<const std::size_t> rows) {
  if (rows.empty()) throw ConfigError("cross_entropy: empty node mask");
  const Matrix& z = logits.value();
  if (labels.size() != z.rows()) {
    throw DimensionError("cross_entropy: " + std::to_string(labels.size()) + " labels for " +
                         std::to_string(z.rows()) + " logit rows");
  }
  const std::size_t classes = z.cols();
  Matrix probs(rows.size(), classes);
  double total = 0.0;
  for (std::size_t m = 0; m < rows.size(); ++m) {
    const std::size_t i = rows[m];
    if (i >= z.rows()) throw DimensionError("cross_entropy: mask row out of range");
    const int label = labels[i];
    if (label < 0 || static_cast<std::size_t>(label) >= classes) {
      throw ContractError("cross_entropy: label " + std::to_string(label) + " outside [0, " +
                          std::to_string(classes) + ")");
    }
    const auto zr = z.row(i);
    const double peak = *std::max_element(zr.begin(), zr.end());
    double acc = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
      probs(m, c) = std::exp(zr[c] - peak);
      acc += probs(m, c);
    }
    for (std::size_t c = 0; c < classes; ++c) probs(m, c) /= acc;
    total += peak + std::log(acc) - zr[static_cast<std::size_t>(label)];
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  Matrix out(1, 1, total * inv);
  std::vector<std::size_t> row_copy(rows.begin(), rows.end());
  std::vector<int> label_copy;
  label_copy.reserve(rows.size());
  for (std::size_t i : rows) label_copy.push_back(labels[i]);
  return make_op(std::move(out), {logits},
                 [probs = std::move(probs), row_copy = std::move(row_copy),
                  label_copy = std::move(label_copy), inv](DiffNode& self) {
                   const double g = self.grad()(0, 0) * inv;
                   Matrix& dz = self.parent_grad(0);
                   for (std::size_t m = 0; m < row_copy.size(); ++m) {
                     auto dr = dz.row(row_copy[m]);
                     for (std::size_t c = 0; c < dr.size(); ++c) dr[c] += g * probs(m, c);
                     dr[static_cast<std::size_t>(label_copy[m])] -= g;
                   }
                 });
}

Matrix gumbel_noise(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix out(rows, cols);
  rng.fill_gumbel(out.values());
  return out;
}

}  // namespace gslearn
