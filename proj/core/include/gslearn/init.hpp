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

#include "gslearn/matrix.hpp"
#include "gslearn/rng.hpp"

namespace gslearn {

/// Uniform(-a, a) with a = sqrt(6 / (rows + cols)).
Matrix glorot_init(std::size_t rows, std::size_t cols, Rng& rng);
double glorot_bound(std::size_t rows, std::size_t cols);

/// Bias initialization.
Matrix zeros_init(std::size_t rows, std::size_t cols);

}  // namespace gslearn
