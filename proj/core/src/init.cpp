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

#include "gslearn/init.hpp"

#include <cmath>

#include "gslearn/error.hpp"

namespace gslearn {

double glorot_bound(std::size_t rows, std::size_t cols) {
  return std::sqrt(6.0 / static_cast<double>(rows + cols));
}

Matrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng) {
  if (rows == 0 || cols == 0) throw ConfigError("glorot_init: dimensions must be positive");
  const double a = glorot_bound(rows, cols);
  Matrix out(rows, cols);
  for (double& v : out.values()) v = rng.uniform(-a, a);
  return out;
}

Matrix zeros_init(std::size_t rows, std::size_t cols) { return Matrix(rows, cols, 0.0); }

}  // namespace gslearn
