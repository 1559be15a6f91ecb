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

// Independent oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "gslearn/autodiff.hpp"
#include "gslearn/matrix.hpp"
#include "gslearn/rng.hpp"

namespace gslearn::testing {

inline Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng, double scale = 1.0) {
  Matrix m(rows, cols);
  for (double& v : m.values()) v = scale * rng.normal();
  return m;
}

inline Matrix unit_rows(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m = random_matrix(rows, cols, rng);
  for (std::size_t i = 0; i < rows; ++i) {
    double sq = 0.0;
    for (double v : m.row(i)) sq += v * v;
    for (double& v : m.row(i)) v /= std::sqrt(sq);
  }
  return m;
}

inline double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-6});
}

/// Central finite differences of a scalar function of one matrix, entry by
/// entry, compared against the analytic gradient. Returns the worst relative
/// error. `f` must rebuild its graph from `m` on every call.
inline double gradient_check(Matrix& m, const Matrix& analytic, const std::function<double()>& f,
                             double h = 1e-5) {
  double worst = 0.0;
  for (std::size_t e = 0; e < m.size(); ++e) {
    double& x = m.values()[e];
    const double x0 = x;
    x = x0 + h;
    const double up = f();
    x = x0 - h;
    const double down = f();
    x = x0;
    worst = std::max(worst, relative_error(analytic.values()[e], (up - down) / (2.0 * h)));
  }
  return worst;
}

/// Checks d loss / d param for every parameter handle; `loss` rebuilds the graph.
inline double gradient_check_params(std::vector<Var> params, const std::function<Var()>& loss,
                                    double h = 1e-5) {
  for (auto& p : params) p.zero_grad();
  backward(loss());
  std::vector<Matrix> grads;
  for (const auto& p : params) grads.push_back(p.grad());
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    worst = std::max(worst, gradient_check(params[i].mutable_value(), grads[i],
                                          [&] { return loss().value()(0, 0); }, h));
  }
  return worst;
}

/// Scalar probe used to turn a matrix-valued op into a loss: sum(w .* out)
/// with fixed random weights, so every output entry contributes.
inline Var weighted_sum(const Var& out, const Matrix& weights) {
  return sum(mul(out, constant(weights)));
}

inline double row_sum(const Matrix& m, std::size_t r) {
  double s = 0.0;
  for (double v : m.row(r)) s += v;
  return s;
}

}  // namespace gslearn::testing
