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

#include "gslearn/autodiff.hpp"
#include "gslearn/rng.hpp"
#include "gslearn/sampler.hpp"
#include "gslearn/similarity.hpp"

namespace gslearn {

/// Learnable projection of n graph nodes onto s transition nodes.
/// structure (W_t) feeds the similarity path, features (W_e) the GCN path.
struct TransitionProjector {
  Var structure;  // s x n
  Var features;   // s x n

  std::size_t nodes() const { return structure.rows(); }
  std::size_t graph_nodes() const { return structure.cols(); }

  /// Glorot-initialized and trainable; W_e starts as a copy of W_t and the
  /// two are updated independently from there.
  static TransitionProjector glorot(std::size_t s, std::size_t n, Rng& rng);
  /// W_t = W_e = I_n, trainable.
  static TransitionProjector identity(std::size_t n);
  /// Frozen random selection: row r is one-hot at a distinct node drawn
  /// without replacement (anchor baseline). Requires s <= n.
  static TransitionProjector random_anchors(std::size_t s, std::size_t n, Rng& rng);

  /// Keeps the first nodes() - count transition nodes.
  void remove_nodes(std::size_t count);
};

/// R = W_t * input (s x d). Throws DimensionError unless W_t.cols == input.rows.
Var project_structure(const Var& input, const TransitionProjector& proj);
/// X_t = W_e * input (s x d).
Var project_features(const Var& input, const TransitionProjector& proj);

struct TransitionStructure {
  SimilarityMatrix similarity;  // n x s
  RelaxedAdjacency adjacency;   // n x s
  Var b;                        // neuralgau only
  Var c;
};

/// Similarities of every node against the s transition candidates only, then
/// relaxed sampling. The largest similarity buffer is n * s entries.
TransitionStructure transition_structure(const EmbeddingMatrix& z,
                                         const EmbeddingMatrix& transition_embeddings,
                                         const KernelSpec& kernel, const NeuralGaussian* neural,
                                         const RelaxOptions& relax, const Rng& rng);

}  // namespace gslearn
