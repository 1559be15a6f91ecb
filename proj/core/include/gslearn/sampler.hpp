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
#include <span>
#include <vector>

#include "gslearn/autodiff.hpp"
#include "gslearn/rng.hpp"
#include "gslearn/similarity.hpp"

namespace gslearn {

/// Differentiable stand-in for K sampled neighbors per node: the mean of K
/// Gumbel-Softmax draws per row. Rows sum to 1.
struct RelaxedAdjacency {
  Var a;
  std::size_t draws = 0;
  double tau = 0.0;
};

enum class NoiseMode {
  /// Fresh standard Gumbel noise per candidate per draw.
  gumbel,
  /// g = 0 (the Gumbel mode); every draw equals softmax(log(pi) / tau).
  none,
};

struct RelaxOptions {
  double tau = 0.25;
  std::size_t draws = 5;
  NoiseMode noise = NoiseMode::gumbel;
  /// Forward emits one-hot argmax per draw, backward uses the soft gradient.
  bool straight_through = false;
};

/// Row i, draw k: y = softmax((log(max(pi_i, 1e-12)) + g) / tau). Row i reads
/// its noise from rng.split(i), so rows are independent of evaluation order.
/// Throws ConfigError for tau <= 0 or draws < 1.
RelaxedAdjacency relaxed_sample(const Var& pi, const RelaxOptions& options, const Rng& rng);
inline RelaxedAdjacency relaxed_sample(const SimilarityMatrix& pi, const RelaxOptions& options,
                                       const Rng& rng) {
  return relaxed_sample(pi.pi, options, rng);
}

/// Row-wise top-k indicator (ties to the lowest column). No gradient.
/// Throws ConfigError when k exceeds the number of columns or is 0.
Matrix hard_knn(const Matrix& scores, std::size_t k);

/// Mean Shannon entropy of `draws` relaxed samples of one probability row at
/// each temperature; the same noise vectors are reused for every temperature.
std::vector<double> entropy_profile(std::span<const double> pi_row, std::span<const double> taus,
                                    std::size_t draws, const Rng& rng);

}  // namespace gslearn
