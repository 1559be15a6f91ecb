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
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "gslearn/autodiff.hpp"
#include "gslearn/rng.hpp"

namespace gslearn {

/// Structure-learner similarity kernels. The selection strings
/// lin|diff|gau|neuralgau|heat are shared with the CLI.
enum class Kernel { lin, diff, gau, neuralgau, heat };

Kernel parse_kernel(std::string_view name);
std::string_view kernel_name(Kernel kernel);

inline constexpr double kDefaultGaussianPeak = 0.5;
inline constexpr double kDefaultGaussianWidth = 0.02 * std::numbers::e;
/// Lower bound on any Gaussian width c_i, applied after c_scale.
inline constexpr double kMinGaussianWidth = 1e-6;

/// Node (or transition-node) embeddings.
struct EmbeddingMatrix {
  Var z;
  bool normalized = false;
};

/// Row-stochastic edge probabilities over the candidate columns (n or s).
struct SimilarityMatrix {
  Var pi;
  Kernel kernel = Kernel::lin;
};

struct FixedGaussian {
  double b = kDefaultGaussianPeak;
  double c = kDefaultGaussianWidth;
};

/// Per-node Gaussian parameters: b_i = sigmoid(z_i . w_b),
/// c_i = max(c_scale * sigmoid(z_i . w_c), kMinGaussianWidth).
struct NeuralGaussian {
  Var w_b;  // 1 x m
  Var w_c;  // 1 x m
  double c_scale = 0.1;

  static NeuralGaussian glorot(std::size_t width, double c_scale, Rng& rng);
  static NeuralGaussian zeros(std::size_t width, double c_scale);
};

/// Linear layers with ReLU between them; optional row-L2 normalization of the output.
class MlpEncoder {
 public:
  MlpEncoder() = default;
  MlpEncoder(std::vector<Var> weights, std::vector<Var> biases, bool normalize);

  /// depth >= 1 linear layers: input_dim -> width -> ... -> width.
  static MlpEncoder glorot(std::size_t input_dim, std::size_t width, std::size_t depth,
                           bool normalize, Rng& rng);
  /// Single identity layer with zero bias (input_dim == width).
  static MlpEncoder identity(std::size_t dim, bool normalize);

  std::size_t input_dim() const;
  std::size_t output_dim() const;
  std::size_t depth() const { return weights_.size(); }
  bool normalize() const { return normalize_; }

  const std::vector<Var>& weights() const { return weights_; }
  const std::vector<Var>& biases() const { return biases_; }

 private:
  std::vector<Var> weights_;
  std::vector<Var> biases_;
  bool normalize_ = true;
};

/// Z = MLP(X), row-normalized when the encoder says so. Rows whose norm falls
/// below 1e-12 are left (near) zero instead of raising.
EmbeddingMatrix embed(const Var& x, const MlpEncoder& encoder);

struct SimilarityOptions {
  /// Full-graph ablation: drop the j == i candidate (requires a square problem).
  /// Masked entries get probability exactly 0.
  bool mask_self = false;
};

// ---- unnormalized scores --------------------------------------------------

/// S = Z C^T
Var inner_product_scores(const Var& z, const Var& c);
/// s_ij = z_i (z_i - c_j)^T
Var difference_scores(const Var& z, const Var& c);
/// phi_ij = exp(-(s_ij - b_i)^2 / c_i); b and widths are n x 1 columns.
Var gaussian_scores(const Var& scores, const Var& b, const Var& widths);
/// phi_ij = exp(-||x_i - c_j||^2 / t)
Var heat_scores(const Var& x, const Var& c, double t);

double gaussian_value(double similarity, double b, double c);
/// Heat kernel on unit vectors, where ||x_i - x_j||^2 = 2 (1 - x_i x_j^T).
double heat_value_normalized(double similarity, double t);

// ---- kernels ---------------------------------------------------------------

SimilarityMatrix linsim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                        SimilarityOptions options = {});
/// Throws ContractError unless both sides are row-normalized.
SimilarityMatrix diffsim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                         SimilarityOptions options = {});
/// Throws ConfigError when params.c <= 0.
SimilarityMatrix gausim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                        const FixedGaussian& params, SimilarityOptions options = {});

struct NeuralGaussianOutput {
  SimilarityMatrix similarity;
  Var b;  // n x 1
  Var c;  // n x 1, after scaling and flooring
};
NeuralGaussianOutput neural_gausim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                                   const NeuralGaussian& params, SimilarityOptions options = {});

/// pi = softmax_rows(phi) with the heat kernel. Throws ConfigError when t <= 0.
SimilarityMatrix heat_kernel(const Var& x, const Var& c, double t,
                             SimilarityOptions options = {});
SimilarityMatrix heat_kernel(const Var& x, double t);

/// Kernel choice plus fixed hyper-parameters, used by the model layers.
struct KernelSpec {
  Kernel kernel = Kernel::neuralgau;
  FixedGaussian gaussian;
  double heat_t = 1.0;
  bool mask_self = false;
};

struct KernelOutput {
  SimilarityMatrix similarity;
  Var b;  // neuralgau only
  Var c;  // neuralgau only
};

/// Dispatch on spec.kernel. `neural` must be non-null for Kernel::neuralgau.
KernelOutput evaluate_kernel(const KernelSpec& spec, const EmbeddingMatrix& z,
                             const EmbeddingMatrix& candidates, const NeuralGaussian* neural);

/// Size accounting for score/probability buffers created by the kernels on the
/// calling thread.
struct SimilarityBufferStats {
  std::size_t peak_entries = 0;
  std::size_t last_rows = 0;
  std::size_t last_cols = 0;
  std::size_t evaluations = 0;
};
SimilarityBufferStats similarity_buffer_stats();
void reset_similarity_buffer_stats();

}  // namespace gslearn
