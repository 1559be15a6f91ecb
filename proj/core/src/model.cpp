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

#include "gslearn/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gslearn/error.hpp"
#include "gslearn/init.hpp"

namespace gslearn {
namespace {

// Init substream tags. Each component draws from its own split so, e.g., the
// GCN weights are identical between full and transition models of one seed.
enum InitTag : std::uint64_t {
  kEncoderTag = 1,
  kNeuralTag = 2,
  kGcnTag = 3,
  kProjectorTag = 4,
};

std::uint64_t tag(std::size_t layer, InitTag what) { return 16 * (layer + 1) + what; }

double unit_norm_error(std::span<const double> v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::abs(std::sqrt(sq) - 1.0);
}

}  // namespace

Var gcn_layer(const Var& adjacency, const Var& features, const Var& weight, const Var& bias,
              bool activate) {
  if (adjacency.cols() != features.rows() || features.cols() != weight.rows()) {
    throw DimensionError("gcn_layer: shapes do not chain, A " + adjacency.value().shape_string() +
                         " F " + features.value().shape_string() + " W " +
                         weight.value().shape_string());
  }
  const std::size_t n = adjacency.rows();
  const std::size_t c = adjacency.cols();
  const std::size_t d_in = weight.rows();
  const std::size_t d_out = weight.cols();
  const std::size_t cost_left = n * c * d_in + n * d_in * d_out;
  const std::size_t cost_right = c * d_in * d_out + n * c * d_out;
  Var out = cost_left < cost_right ? matmul(matmul(adjacency, features), weight)
                                   : matmul(adjacency, matmul(features, weight));
  if (bias) out = add_row_vector(out, bias);
  return activate ? relu(out) : out;
}

AggregateResult theorem1_aggregate(std::span<const double> h, const Matrix& neighbors) {
  if (neighbors.rows() == 0) throw ContractError("theorem1_aggregate: need at least one neighbor");
  if (neighbors.cols() != h.size()) {
    throw DimensionError("theorem1_aggregate: neighbor width " + std::to_string(neighbors.cols()) +
                         " != " + std::to_string(h.size()));
  }
  constexpr double tol = 1e-9;
  if (unit_norm_error(h) > tol) throw ContractError("theorem1_aggregate: h is not unit-norm");
  for (std::size_t j = 0; j < neighbors.rows(); ++j) {
    if (unit_norm_error(neighbors.row(j)) > tol) {
      throw ContractError("theorem1_aggregate: neighbor " + std::to_string(j) +
                          " is not unit-norm");
    }
  }
  AggregateResult r;
  r.aggregate.assign(h.size(), 0.0);
  const double inv = 1.0 / static_cast<double>(neighbors.rows());
  for (std::size_t j = 0; j < neighbors.rows(); ++j)
    for (std::size_t k = 0; k < h.size(); ++k) r.aggregate[k] += neighbors(j, k) * inv;
  double sq = 0.0;
  for (std::size_t k = 0; k < h.size(); ++k) {
    const double d = r.aggregate[k] - h[k];
    sq += d * d;
  }
  r.distance = std::sqrt(sq);
  return r;
}

GslModel::GslModel(const ModelConfig& config, std::size_t num_nodes, std::size_t input_dim,
                   std::size_t num_classes)
    : config_(config), num_nodes_(num_nodes), input_dim_(input_dim), num_classes_(num_classes) {
  validate(config_);
  if (num_nodes_ == 0 || input_dim_ == 0 || num_classes_ < 2) {
    throw ConfigError("GslModel: need n >= 1, d >= 1 and at least two classes");
  }
  const Rng init = Rng(config_.seed).substream(Stream::init);
  const std::size_t width = config_.embedding_width();
  const std::array<std::size_t, 2> in_dims{input_dim_, config_.hidden};
  const std::array<std::size_t, 2> out_dims{config_.hidden, num_classes_};

  for (std::size_t l = 0; l < 2; ++l) {
    if (config_.mode != Mode::knn) {
      Rng r = init.split(tag(l, kEncoderTag));
      structure_[l].encoder =
          MlpEncoder::glorot(in_dims[l], width, config_.encoder_depth,
                             config_.normalize_embeddings, r);
      if (config_.kernel == Kernel::neuralgau) {
        Rng rn = init.split(tag(l, kNeuralTag));
        structure_[l].neural = NeuralGaussian::glorot(width, config_.c_scale, rn);
      }
    }
    Rng rg = init.split(tag(l, kGcnTag));
    gcn_[l].weight = parameter(glorot_init(in_dims[l], out_dims[l], rg));
    gcn_[l].bias = parameter(zeros_init(1, out_dims[l]));
  }

  if (config_.mode == Mode::transition) {
    const std::size_t count = config_.shared_transition ? 1 : 2;
    for (std::size_t l = 0; l < count; ++l) {
      Rng rp = init.split(tag(l, kProjectorTag));
      projectors_.push_back(
          config_.anchors_random
              ? TransitionProjector::random_anchors(config_.transition_nodes, num_nodes_, rp)
              : TransitionProjector::glorot(config_.transition_nodes, num_nodes_, rp));
    }
  }
}

TransitionProjector& GslModel::projector(std::size_t layer) {
  if (projectors_.empty()) throw ContractError("projector: model is not in transition mode");
  return projectors_.size() == 1 ? projectors_.front() : projectors_.at(layer);
}

const TransitionProjector& GslModel::projector(std::size_t layer) const {
  if (projectors_.empty()) throw ContractError("projector: model is not in transition mode");
  return projectors_.size() == 1 ? projectors_.front() : projectors_.at(layer);
}

void GslModel::set_identity_projections() {
  if (config_.mode != Mode::transition) {
    throw ContractError("set_identity_projections: model is not in transition mode");
  }
  if (config_.transition_nodes != num_nodes_) {
    throw ContractError("set_identity_projections: needs s == n");
  }
  for (auto& p : projectors_) p = TransitionProjector::identity(num_nodes_);
}

void GslModel::remove_transition_nodes(std::size_t count) {
  if (config_.mode != Mode::transition) {
    throw ContractError("remove_transition_nodes: model is not in transition mode");
  }
  for (auto& p : projectors_) p.remove_nodes(count);
  config_.transition_nodes -= count;
}

void GslModel::build_knn_graph(const Matrix& features) {
  if (config_.mode != Mode::knn) throw ContractError("build_knn_graph: model is not in knn mode");
  if (features.rows() != num_nodes_ || features.cols() != input_dim_) {
    throw DimensionError("build_knn_graph: features " + features.shape_string() +
                         " do not match model " + shape_string(num_nodes_, input_dim_));
  }
  Var x = constant(features);
  if (config_.normalize_features) x = row_l2_normalize(x, {.min_norm = 1e-12});
  Matrix scores = config_.kernel == Kernel::heat ? heat_scores(x, x, config_.heat_t).value()
                                                 : inner_product_scores(x, x).value();
  if (config_.mask_self) {
    for (std::size_t i = 0; i < scores.rows(); ++i)
      scores(i, i) = -std::numeric_limits<double>::infinity();
  }
  Matrix a = hard_knn(scores, std::min(config_.k, scores.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double deg = 0.0;
    for (double v : a.row(i)) deg += v;
    for (double& v : a.row(i)) v /= deg;
  }
  knn_adjacency_ = std::move(a);
}

GslModel::LayerOutput GslModel::learn_structure(std::size_t layer, const Var& input,
                                                const Rng& gumbel, bool training) const {
  LayerOutput out;
  if (config_.mode == Mode::knn) {
    if (!knn_adjacency_) throw ContractError("forward: knn mode needs build_knn_graph() first");
    out.adjacency = constant(*knn_adjacency_);
    out.features = input;
  } else {
    const RelaxOptions relax{.tau = config_.tau,
                             .draws = config_.k,
                             .noise = training ? NoiseMode::gumbel : NoiseMode::none,
                             .straight_through = config_.straight_through};
    const Rng rng = gumbel.split(layer);
    const StructureLayer& sl = structure_[layer];
    const NeuralGaussian* neural = config_.kernel == Kernel::neuralgau ? &sl.neural : nullptr;
    const EmbeddingMatrix z = embed(input, sl.encoder);

    if (config_.mode == Mode::full) {
      KernelOutput k = evaluate_kernel(config_.kernel_spec(), z, z, neural);
      out.adjacency = relaxed_sample(k.similarity, relax, rng).a;
      out.features = input;
      out.trace.similarity = k.similarity.pi;
      out.trace.b = k.b;
      out.trace.c = k.c;
    } else {
      const TransitionProjector& proj = projector(layer);
      const EmbeddingMatrix r = embed(project_structure(input, proj), sl.encoder);
      TransitionStructure ts =
          transition_structure(z, r, config_.kernel_spec(), neural, relax, rng);
      out.adjacency = ts.adjacency.a;
      out.features = project_features(input, proj);
      out.trace.similarity = ts.similarity.pi;
      out.trace.b = ts.b;
      out.trace.c = ts.c;
    }
  }
  if (config_.self_loop) {
    out.adjacency = mix(out.adjacency, 0.5, constant(Matrix::identity(num_nodes_)), 0.5);
  }
  out.trace.adjacency = out.adjacency;
  return out;
}

ForwardResult GslModel::forward(const Matrix& features, const Rng& rng, bool training) const {
  if (features.rows() != num_nodes_ || features.cols() != input_dim_) {
    throw DimensionError("forward: features " + features.shape_string() + " do not match model " +
                         shape_string(num_nodes_, input_dim_));
  }
  Var x = constant(features);
  if (config_.normalize_features) x = row_l2_normalize(x, {.min_norm = 1e-12});
  const Rng gumbel = rng.substream(Stream::gumbel);
  Rng drop = rng.substream(Stream::dropout);

  ForwardResult result;
  LayerOutput first = learn_structure(0, x, gumbel, training);
  Var h = gcn_layer(first.adjacency, first.features, gcn_[0].weight, gcn_[0].bias, true);
  h = dropout(h, config_.dropout, drop, training);
  LayerOutput second = learn_structure(1, h, gumbel, training);
  result.logits = gcn_layer(second.adjacency, second.features, gcn_[1].weight, gcn_[1].bias, false);
  result.layers = {first.trace, second.trace};
  return result;
}

std::vector<NamedMatrix> GslModel::named_matrices() const {
  std::vector<NamedMatrix> out;
  for (std::size_t l = 0; l < 2; ++l) {
    const std::string prefix = "layer" + std::to_string(l + 1) + ".";
    const StructureLayer& sl = structure_[l];
    for (std::size_t k = 0; k < sl.encoder.depth(); ++k) {
      out.push_back({prefix + "encoder.weight" + std::to_string(k), sl.encoder.weights()[k], true});
      out.push_back({prefix + "encoder.bias" + std::to_string(k), sl.encoder.biases()[k], true});
    }
    if (sl.neural.w_b) {
      out.push_back({prefix + "gauss.w_b", sl.neural.w_b, true});
      out.push_back({prefix + "gauss.w_c", sl.neural.w_c, true});
    }
    out.push_back({prefix + "gcn.weight", gcn_[l].weight, true});
    out.push_back({prefix + "gcn.bias", gcn_[l].bias, true});
  }
  for (std::size_t p = 0; p < projectors_.size(); ++p) {
    const std::string prefix = "transition" + std::to_string(p + 1) + ".";
    const bool trainable = projectors_[p].structure.requires_grad();
    out.push_back({prefix + "structure", projectors_[p].structure, trainable});
    out.push_back({prefix + "features", projectors_[p].features, trainable});
  }
  return out;
}

std::vector<Var> GslModel::parameters() const {
  std::vector<Var> out;
  for (const auto& nm : named_matrices())
    if (nm.trainable) out.push_back(nm.var);
  return out;
}

}  // namespace gslearn
