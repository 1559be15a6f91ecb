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

#include "gslearn/transition.hpp"

#include <numeric>
#include <string>
#include <vector>

#include "gslearn/error.hpp"
#include "gslearn/init.hpp"

namespace gslearn {
namespace {

Var project(const char* op, const Var& w, const Var& input) {
  if (w.cols() != input.rows()) {
    throw DimensionError(std::string(op) + ": projection " + w.value().shape_string() +
                         " cannot multiply input " + input.value().shape_string());
  }
  return matmul(w, input);
}

Var keep_rows(const Var& v, std::size_t rows) {
  const Matrix& m = v.value();
  Matrix out(rows, m.cols());
  for (std::size_t i = 0; i < rows; ++i)
    std::copy(m.row(i).begin(), m.row(i).end(), out.row(i).begin());
  return v.requires_grad() ? parameter(std::move(out)) : constant(std::move(out));
}

}  // namespace

TransitionProjector TransitionProjector::glorot(std::size_t s, std::size_t n, Rng& rng) {
  // One draw for both paths: transition node r then starts with features that
  // match the mixture its structure embedding describes. Independent draws
  // leave the two paths uncorrelated and training stalls at chance.
  Matrix w = glorot_init(s, n, rng);
  return {parameter(w), parameter(std::move(w))};
}

TransitionProjector TransitionProjector::identity(std::size_t n) {
  return {parameter(Matrix::identity(n)), parameter(Matrix::identity(n))};
}

TransitionProjector TransitionProjector::random_anchors(std::size_t s, std::size_t n, Rng& rng) {
  if (s > n) {
    throw ConfigError("random anchors: cannot pick " + std::to_string(s) +
                      " distinct anchors from " + std::to_string(n) + " nodes");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(std::span<std::size_t>(order));
  Matrix sel(s, n);
  for (std::size_t r = 0; r < s; ++r) sel(r, order[r]) = 1.0;
  return {constant(sel), constant(sel)};
}

void TransitionProjector::remove_nodes(std::size_t count) {
  if (count >= nodes()) {
    throw ConfigError("remove_nodes: removing " + std::to_string(count) + " of " +
                      std::to_string(nodes()) + " transition nodes leaves none");
  }
  const std::size_t keep = nodes() - count;
  structure = keep_rows(structure, keep);
  features = keep_rows(features, keep);
}

Var project_structure(const Var& input, const TransitionProjector& proj) {
  return project("project_structure", proj.structure, input);
}

Var project_features(const Var& input, const TransitionProjector& proj) {
  return project("project_features", proj.features, input);
}

TransitionStructure transition_structure(const EmbeddingMatrix& z,
                                         const EmbeddingMatrix& transition_embeddings,
                                         const KernelSpec& kernel, const NeuralGaussian* neural,
                                         const RelaxOptions& relax, const Rng& rng) {
  KernelSpec spec = kernel;
  spec.mask_self = false;  // there is no "self" column against transition nodes
  KernelOutput k = evaluate_kernel(spec, z, transition_embeddings, neural);
  RelaxedAdjacency a = relaxed_sample(k.similarity, relax, rng);
  return {k.similarity, a, k.b, k.c};
}

}  // namespace gslearn
