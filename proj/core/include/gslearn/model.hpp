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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gslearn/autodiff.hpp"
#include "gslearn/config.hpp"
#include "gslearn/rng.hpp"
#include "gslearn/sampler.hpp"
#include "gslearn/similarity.hpp"
#include "gslearn/transition.hpp"

namespace gslearn {

/// out = act(A * F * W + bias); act is ReLU when `activate`, identity otherwise.
/// The association order is picked by flop count; the result is a pure
/// function of the operand shapes and values.
Var gcn_layer(const Var& adjacency, const Var& features, const Var& weight, const Var& bias,
              bool activate);

struct AggregateResult {
  std::vector<double> aggregate;  // (1/K) sum_j h_j
  double distance = 0.0;          // ||aggregate - h||_2
};

/// Mean aggregation of K unit-norm neighbors (rows of `neighbors`) around a
/// unit-norm h. Throws ContractError when any vector is not unit-norm (1e-9).
AggregateResult theorem1_aggregate(std::span<const double> h, const Matrix& neighbors);

struct StructureLayer {
  MlpEncoder encoder;
  NeuralGaussian neural;  // empty handles unless kernel == neuralgau
};

struct GcnWeights {
  Var weight;
  Var bias;
};

struct LayerTrace {
  Var adjacency;   // relaxed (or fixed kNN) adjacency, n x C
  Var similarity;  // pi; empty in knn mode
  Var b;           // neuralgau only, n x 1
  Var c;
};

struct ForwardResult {
  Var logits;  // n x num_classes
  std::array<LayerTrace, 2> layers;
};

struct NamedMatrix {
  std::string name;
  Var var;
  bool trainable = true;
};

/// Two GCN layers, each preceded by its own structure learner.
class GslModel {
 public:
  /// Parameters are drawn from Rng(config.seed).substream(Stream::init).
  GslModel(const ModelConfig& config, std::size_t num_nodes, std::size_t input_dim,
           std::size_t num_classes);

  const ModelConfig& config() const { return config_; }
  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t input_dim() const { return input_dim_; }
  std::size_t num_classes() const { return num_classes_; }

  /// Training draws Gumbel noise from rng.substream(gumbel) and dropout masks
  /// from rng.substream(dropout). Inference uses noise-free relaxation and no
  /// dropout, so it is a deterministic function of the parameters.
  ForwardResult forward(const Matrix& features, const Rng& rng, bool training) const;

  /// Every stored matrix in checkpoint order, frozen ones included.
  std::vector<NamedMatrix> named_matrices() const;
  /// Trainable parameters only.
  std::vector<Var> parameters() const;

  /// knn mode: fixes the hard kNN graph from raw feature similarities.
  void build_knn_graph(const Matrix& features);
  bool has_knn_graph() const { return knn_adjacency_.has_value(); }

  /// transition mode with s == n: W_t = W_e = I on every projector.
  void set_identity_projections();
  /// Drops the last `count` transition nodes from every projector.
  void remove_transition_nodes(std::size_t count);

  StructureLayer& structure(std::size_t layer) { return structure_.at(layer); }
  const StructureLayer& structure(std::size_t layer) const { return structure_.at(layer); }
  GcnWeights& gcn(std::size_t layer) { return gcn_.at(layer); }
  const GcnWeights& gcn(std::size_t layer) const { return gcn_.at(layer); }
  /// Projector used by `layer` (the shared one under --shared-transition).
  TransitionProjector& projector(std::size_t layer);
  const TransitionProjector& projector(std::size_t layer) const;
  std::size_t projector_count() const { return projectors_.size(); }

 private:
  struct LayerOutput {
    Var adjacency;
    Var features;
    LayerTrace trace;
  };
  LayerOutput learn_structure(std::size_t layer, const Var& input, const Rng& gumbel,
                              bool training) const;

  ModelConfig config_;
  std::size_t num_nodes_;
  std::size_t input_dim_;
  std::size_t num_classes_;
  std::array<StructureLayer, 2> structure_;
  std::array<GcnWeights, 2> gcn_;
  std::vector<TransitionProjector> projectors_;
  std::optional<Matrix> knn_adjacency_;
};

}  // namespace gslearn
