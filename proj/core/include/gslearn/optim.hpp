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
#include <cstdint>
#include <span>
#include <vector>

#include "gslearn/autodiff.hpp"

namespace gslearn {

struct AdamOptions {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  AdamOptions options;
  std::vector<Matrix> first_moment;
  std::vector<Matrix> second_moment;
  std::uint64_t step = 0;
};

AdamState make_adam_state(std::span<const Var> params, AdamOptions options);

/// theta -= lr * m_hat / (sqrt(v_hat) + eps), with bias-corrected moments.
/// Reads each parameter's gradient slot; does not zero it.
void adam_step(std::span<Var> params, AdamState& state);

/// Matrix-level form of the same update.
void adam_step(std::span<Matrix* const> params, std::span<const Matrix* const> grads,
               AdamState& state);

void zero_grads(std::span<Var> params);

}  // namespace gslearn
