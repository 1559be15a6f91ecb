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

#include "gslearn/optim.hpp"

#include <cmath>
#include <string>

#include "gslearn/error.hpp"

namespace gslearn {

AdamState make_adam_state(std::span<const Var> params, AdamOptions options) {
  AdamState state;
  state.options = options;
  for (const Var& p : params) {
    state.first_moment.push_back(Matrix::zeros_like(p.value()));
    state.second_moment.push_back(Matrix::zeros_like(p.value()));
  }
  return state;
}

void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state) {
  if (params.size() != grads.size() || params.size() != state.first_moment.size()) {
    throw DimensionError("adam_step: " + std::to_string(params.size()) + " parameters, " +
                         std::to_string(grads.size()) + " gradients, " +
                         std::to_string(state.first_moment.size()) + " moment slots");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!params[i]->same_shape(*grads[i]) || !params[i]->same_shape(state.first_moment[i]) ||
        !params[i]->same_shape(state.second_moment[i])) {
      throw DimensionError("adam_step: parameter " + std::to_string(i) + " shape " +
                           params[i]->shape_string() + " disagrees with gradient " +
                           grads[i]->shape_string() + " or moment " +
                           state.first_moment[i].shape_string());
    }
  }

  ++state.step;
  const auto& o = state.options;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(o.beta1, t);
  const double correction2 = 1.0 - std::pow(o.beta2, t);

  for (std::size_t i = 0; i < params.size(); ++i) {
    auto theta = params[i]->values();
    auto g = grads[i]->values();
    auto m = state.first_moment[i].values();
    auto v = state.second_moment[i].values();
    for (std::size_t k = 0; k < theta.size(); ++k) {
      m[k] = o.beta1 * m[k] + (1.0 - o.beta1) * g[k];
      v[k] = o.beta2 * v[k] + (1.0 - o.beta2) * g[k] * g[k];
      const double m_hat = m[k] / correction1;
      const double v_hat = v[k] / correction2;
      theta[k] -= o.lr * m_hat / (std::sqrt(v_hat) + o.eps);
    }
  }
}

void adam_step(std::span<Var> params, AdamState& state) {
  std::vector<Matrix*> values;
  std::vector<const Matrix*> grads;
  values.reserve(params.size());
  grads.reserve(params.size());
  for (Var& p : params) {
    values.push_back(&p.mutable_value());
    grads.push_back(&p.mutable_grad());
  }
  adam_step(std::span<Matrix* const>(values), std::span<const Matrix* const>(grads), state);
}

void zero_grads(std::span<Var> params) {
  for (Var& p : params) p.zero_grad();
}

}  // namespace gslearn
