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

#include "gslearn/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gslearn/error.hpp"
#include "gslearn/init.hpp"

namespace gslearn {
namespace {

thread_local SimilarityBufferStats tls_stats;

void note_buffer(std::size_t rows, std::size_t cols) {
  tls_stats.peak_entries = std::max(tls_stats.peak_entries, rows * cols);
  tls_stats.last_rows = rows;
  tls_stats.last_cols = cols;
  ++tls_stats.evaluations;
}

void require_width(const char* op, const Var& z, const Var& c) {
  if (z.cols() != c.cols()) {
    throw DimensionError(std::string(op) + ": embedding widths differ, " +
                         z.value().shape_string() + " vs " + c.value().shape_string());
  }
}

void require_unit_rows(const char* op, const EmbeddingMatrix& e) {
  if (!e.normalized) {
    throw ContractError(std::string(op) + ": embeddings must be row-L2-normalized");
  }
  const Matrix& m = e.z.value();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sq = 0.0;
    for (double v : m.row(i)) sq += v * v;
    if (sq != 0.0 && std::abs(std::sqrt(sq) - 1.0) > 1e-6) {
      throw ContractError(std::string(op) + ": row " + std::to_string(i) +
                          " is flagged normalized but has norm " + std::to_string(std::sqrt(sq)));
    }
  }
}

Var mask_diagonal(const Var& scores) {
  if (scores.rows() != scores.cols()) {
    throw DimensionError("mask_self requires square scores, got " +
                         scores.value().shape_string());
  }
  constexpr double kMasked = -1e300;
  Matrix out = scores.value();
  for (std::size_t i = 0; i < out.rows(); ++i) out(i, i) = kMasked;
  return make_op(std::move(out), {scores}, [](DiffNode& self) {
    Matrix g = self.grad();
    for (std::size_t i = 0; i < g.rows(); ++i) g(i, i) = 0.0;
    self.accumulate_parent(0, g);
  });
}

SimilarityMatrix finish(Var scores, Kernel kernel, const SimilarityOptions& options) {
  if (options.mask_self) scores = mask_diagonal(scores);
  return {softmax_rows(scores), kernel};
}

Var constant_column(std::size_t rows, double value) { return constant(Matrix(rows, 1, value)); }

}  // namespace

Kernel parse_kernel(std::string_view name) {
  if (name == "lin") return Kernel::lin;
  if (name == "diff") return Kernel::diff;
  if (name == "gau") return Kernel::gau;
  if (name == "neuralgau") return Kernel::neuralgau;
  if (name == "heat") return Kernel::heat;
  throw ConfigError("unknown kernel '" + std::string(name) +
                    "' (expected lin|diff|gau|neuralgau|heat)");
}

std::string_view kernel_name(Kernel kernel) {
  switch (kernel) {
    case Kernel::lin: return "lin";
    case Kernel::diff: return "diff";
    case Kernel::gau: return "gau";
    case Kernel::neuralgau: return "neuralgau";
    case Kernel::heat: return "heat";
  }
  return "?";
}

NeuralGaussian NeuralGaussian::glorot(std::size_t width, double c_scale, Rng& rng) {
  return {parameter(glorot_init(1, width, rng)), parameter(glorot_init(1, width, rng)), c_scale};
}

NeuralGaussian NeuralGaussian::zeros(std::size_t width, double c_scale) {
  return {parameter(zeros_init(1, width)), parameter(zeros_init(1, width)), c_scale};
}

// ---- encoder ---------------------------------------------------------------

MlpEncoder::MlpEncoder(std::vector<Var> weights, std::vector<Var> biases, bool normalize)
    : weights_(std::move(weights)), biases_(std::move(biases)), normalize_(normalize) {
  if (weights_.empty() || weights_.size() != biases_.size()) {
    throw ConfigError("MlpEncoder: need one bias per weight matrix and at least one layer");
  }
  for (std::size_t l = 0; l < weights_.size(); ++l) {
    if (biases_[l].rows() != 1 || biases_[l].cols() != weights_[l].cols()) {
      throw DimensionError("MlpEncoder: bias " + biases_[l].value().shape_string() +
                           " does not match weight " + weights_[l].value().shape_string());
    }
    if (l > 0 && weights_[l].rows() != weights_[l - 1].cols()) {
      throw DimensionError("MlpEncoder: layer " + std::to_string(l) + " input " +
                           std::to_string(weights_[l].rows()) + " != previous output " +
                           std::to_string(weights_[l - 1].cols()));
    }
  }
}

MlpEncoder MlpEncoder::glorot(std::size_t input_dim, std::size_t width, std::size_t depth,
                              bool normalize, Rng& rng) {
  if (depth == 0) throw ConfigError("MlpEncoder: depth must be >= 1");
  std::vector<Var> weights;
  std::vector<Var> biases;
  std::size_t in = input_dim;
  for (std::size_t l = 0; l < depth; ++l) {
    weights.push_back(parameter(glorot_init(in, width, rng)));
    biases.push_back(parameter(zeros_init(1, width)));
    in = width;
  }
  return MlpEncoder(std::move(weights), std::move(biases), normalize);
}

MlpEncoder MlpEncoder::identity(std::size_t dim, bool normalize) {
  return MlpEncoder({parameter(Matrix::identity(dim))}, {parameter(zeros_init(1, dim))},
                    normalize);
}

std::size_t MlpEncoder::input_dim() const { return weights_.front().rows(); }
std::size_t MlpEncoder::output_dim() const { return weights_.back().cols(); }

EmbeddingMatrix embed(const Var& x, const MlpEncoder& encoder) {
  if (x.cols() != encoder.input_dim()) {
    throw ConfigError("embed: features have " + std::to_string(x.cols()) +
                      " columns, encoder expects " + std::to_string(encoder.input_dim()));
  }
  Var h = x;
  for (std::size_t l = 0; l < encoder.depth(); ++l) {
    h = add_row_vector(matmul(h, encoder.weights()[l]), encoder.biases()[l]);
    if (l + 1 < encoder.depth()) h = relu(h);
  }
  if (encoder.normalize()) return {row_l2_normalize(h, {.min_norm = 1e-12}), true};
  return {h, false};
}

// ---- scores ----------------------------------------------------------------

Var inner_product_scores(const Var& z, const Var& c) {
  require_width("inner_product_scores", z, c);
  note_buffer(z.rows(), c.rows());
  return matmul_nt(z, c);
}

Var difference_scores(const Var& z, const Var& c) {
  require_width("difference_scores", z, c);
  note_buffer(z.rows(), c.rows());
  const Matrix& zv = z.value();
  Matrix out = gslearn::matmul_nt(zv, c.value());
  std::vector<double> sq(zv.rows(), 0.0);
  for (std::size_t i = 0; i < zv.rows(); ++i) {
    for (double v : zv.row(i)) sq[i] += v * v;
    for (double& s : out.row(i)) s = sq[i] - s;
  }
  return make_op(std::move(out), {z, c}, [](DiffNode& self) {
    const Matrix& g = self.grad();
    const Matrix& zv = self.parents()[0].value();
    const Matrix& cv = self.parents()[1].value();
    if (self.parent_requires_grad(0)) {
      // dz_i = 2 z_i sum_j g_ij - (g C)_i
      Matrix dz = gslearn::matmul(g, cv);
      for (std::size_t i = 0; i < dz.rows(); ++i) {
        double row_sum = 0.0;
        for (double v : g.row(i)) row_sum += v;
        for (std::size_t k = 0; k < dz.cols(); ++k) dz(i, k) = 2.0 * zv(i, k) * row_sum - dz(i, k);
      }
      self.accumulate_parent(0, dz);
    }
    if (self.parent_requires_grad(1)) {
      // dc_j = -(g^T Z)_j
      Matrix dc = matmul_tn(g, zv);
      for (double& v : dc.values()) v = -v;
      self.accumulate_parent(1, dc);
    }
  });
}

Var gaussian_scores(const Var& scores, const Var& b, const Var& widths) {
  const std::size_t n = scores.rows();
  if (b.rows() != n || b.cols() != 1 || widths.rows() != n || widths.cols() != 1) {
    throw DimensionError("gaussian_scores: b " + b.value().shape_string() + " and c " +
                         widths.value().shape_string() + " must be " + shape_string(n, 1));
  }
  const Matrix& s = scores.value();
  Matrix out(s.rows(), s.cols());
  std::vector<double> width(n);
  std::vector<char> floored(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    width[i] = widths.value()(i, 0);
    if (width[i] < kMinGaussianWidth) {
      width[i] = kMinGaussianWidth;
      floored[i] = 1;
    }
    const double bi = b.value()(i, 0);
    const auto sr = s.row(i);
    auto yr = out.row(i);
    for (std::size_t j = 0; j < sr.size(); ++j) {
      const double d = sr[j] - bi;
      yr[j] = std::exp(-d * d / width[i]);
    }
  }
  return make_op(std::move(out), {scores, b, widths},
                 [width = std::move(width), floored = std::move(floored)](DiffNode& self) {
                   const Matrix& phi = self.value();
                   const Matrix& g = self.grad();
                   const Matrix& s = self.parents()[0].value();
                   const Matrix& b = self.parents()[1].value();
                   const bool want_s = self.parent_requires_grad(0);
                   const bool want_b = self.parent_requires_grad(1);
                   const bool want_c = self.parent_requires_grad(2);
                   Matrix ds = want_s ? Matrix(s.rows(), s.cols()) : Matrix();
                   Matrix db(s.rows(), 1);
                   Matrix dc(s.rows(), 1);
                   for (std::size_t i = 0; i < s.rows(); ++i) {
                     const double ci = width[i];
                     double acc_b = 0.0;
                     double acc_c = 0.0;
                     for (std::size_t j = 0; j < s.cols(); ++j) {
                       const double d = s(i, j) - b(i, 0);
                       const double w = g(i, j) * phi(i, j);
                       const double dphi_ds = -2.0 * d / ci;
                       if (want_s) ds(i, j) = w * dphi_ds;
                       acc_b -= w * dphi_ds;
                       acc_c += w * d * d / (ci * ci);
                     }
                     db(i, 0) = acc_b;
                     dc(i, 0) = floored[i] ? 0.0 : acc_c;
                   }
                   if (want_s) self.accumulate_parent(0, ds);
                   if (want_b) self.accumulate_parent(1, db);
                   if (want_c) self.accumulate_parent(2, dc);
                 });
}

Var heat_scores(const Var& x, const Var& c, double t) {
  if (!(t > 0.0)) throw ConfigError("heat kernel: t must be > 0, got " + std::to_string(t));
  require_width("heat_scores", x, c);
  note_buffer(x.rows(), c.rows());
  const Matrix& xv = x.value();
  const Matrix& cv = c.value();
  Matrix out = gslearn::matmul_nt(xv, cv);
  std::vector<double> xsq(xv.rows(), 0.0);
  std::vector<double> csq(cv.rows(), 0.0);
  for (std::size_t i = 0; i < xv.rows(); ++i)
    for (double v : xv.row(i)) xsq[i] += v * v;
  for (std::size_t j = 0; j < cv.rows(); ++j)
    for (double v : cv.row(j)) csq[j] += v * v;
  for (std::size_t i = 0; i < out.rows(); ++i) {
    auto r = out.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double dist_sq = std::max(0.0, xsq[i] + csq[j] - 2.0 * r[j]);
      r[j] = std::exp(-dist_sq / t);
    }
  }
  return make_op(std::move(out), {x, c}, [t](DiffNode& self) {
    const Matrix& phi = self.value();
    const Matrix& g = self.grad();
    const Matrix& xv = self.parents()[0].value();
    const Matrix& cv = self.parents()[1].value();
    Matrix w(phi.rows(), phi.cols());
    for (std::size_t k = 0; k < w.size(); ++k) w.values()[k] = g.values()[k] * phi.values()[k];
    const double coef = -2.0 / t;
    if (self.parent_requires_grad(0)) {
      // dx_i = coef * (x_i sum_j w_ij - (W C)_i)
      Matrix dx = gslearn::matmul(w, cv);
      for (std::size_t i = 0; i < dx.rows(); ++i) {
        double row_sum = 0.0;
        for (double v : w.row(i)) row_sum += v;
        for (std::size_t k = 0; k < dx.cols(); ++k)
          dx(i, k) = coef * (xv(i, k) * row_sum - dx(i, k));
      }
      self.accumulate_parent(0, dx);
    }
    if (self.parent_requires_grad(1)) {
      Matrix dc = matmul_tn(w, xv);
      std::vector<double> col_sum(w.cols(), 0.0);
      for (std::size_t i = 0; i < w.rows(); ++i)
        for (std::size_t j = 0; j < w.cols(); ++j) col_sum[j] += w(i, j);
      for (std::size_t j = 0; j < dc.rows(); ++j)
        for (std::size_t k = 0; k < dc.cols(); ++k)
          dc(j, k) = coef * (cv(j, k) * col_sum[j] - dc(j, k));
      self.accumulate_parent(1, dc);
    }
  });
}

double gaussian_value(double similarity, double b, double c) {
  const double d = similarity - b;
  return std::exp(-d * d / c);
}

double heat_value_normalized(double similarity, double t) {
  return std::exp(-2.0 * (1.0 - similarity) / t);
}

// ---- kernels ---------------------------------------------------------------

SimilarityMatrix linsim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                        SimilarityOptions options) {
  return finish(inner_product_scores(z.z, c.z), Kernel::lin, options);
}

SimilarityMatrix diffsim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                         SimilarityOptions options) {
  require_unit_rows("diffsim", z);
  require_unit_rows("diffsim", c);
  return finish(difference_scores(z.z, c.z), Kernel::diff, options);
}

SimilarityMatrix gausim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                        const FixedGaussian& params, SimilarityOptions options) {
  if (!(params.c > 0.0)) {
    throw ConfigError("gausim: width c must be > 0, got " + std::to_string(params.c));
  }
  const std::size_t n = z.z.rows();
  Var phi = gaussian_scores(inner_product_scores(z.z, c.z), constant_column(n, params.b),
                            constant_column(n, params.c));
  return finish(phi, Kernel::gau, options);
}

NeuralGaussianOutput neural_gausim(const EmbeddingMatrix& z, const EmbeddingMatrix& c,
                                   const NeuralGaussian& params, SimilarityOptions options) {
  const std::size_t m = z.z.cols();
  if (params.w_b.rows() != 1 || params.w_b.cols() != m || params.w_c.rows() != 1 ||
      params.w_c.cols() != m) {
    throw DimensionError("neural_gausim: w_b " + params.w_b.value().shape_string() + ", w_c " +
                         params.w_c.value().shape_string() + " must be " + shape_string(1, m));
  }
  Var b = sigmoid(matmul_nt(z.z, params.w_b));
  Var width = scale(sigmoid(matmul_nt(z.z, params.w_c)), params.c_scale);
  Var phi = gaussian_scores(inner_product_scores(z.z, c.z), b, width);

  // Report the width actually used.
  Matrix used = width.value();
  for (double& v : used.values()) v = std::max(v, kMinGaussianWidth);
  return {finish(phi, Kernel::neuralgau, options), b, constant(std::move(used))};
}

SimilarityMatrix heat_kernel(const Var& x, const Var& c, double t, SimilarityOptions options) {
  return finish(heat_scores(x, c, t), Kernel::heat, options);
}

SimilarityMatrix heat_kernel(const Var& x, double t) { return heat_kernel(x, x, t); }

KernelOutput evaluate_kernel(const KernelSpec& spec, const EmbeddingMatrix& z,
                             const EmbeddingMatrix& candidates, const NeuralGaussian* neural) {
  const SimilarityOptions options{.mask_self = spec.mask_self};
  switch (spec.kernel) {
    case Kernel::lin: return {linsim(z, candidates, options), {}, {}};
    case Kernel::diff: return {diffsim(z, candidates, options), {}, {}};
    case Kernel::gau: return {gausim(z, candidates, spec.gaussian, options), {}, {}};
    case Kernel::neuralgau: {
      if (neural == nullptr) throw ContractError("evaluate_kernel: neuralgau needs parameters");
      auto out = neural_gausim(z, candidates, *neural, options);
      return {out.similarity, out.b, out.c};
    }
    case Kernel::heat: return {heat_kernel(z.z, candidates.z, spec.heat_t, options), {}, {}};
  }
  throw ContractError("evaluate_kernel: unknown kernel");
}

SimilarityBufferStats similarity_buffer_stats() { return tls_stats; }
void reset_similarity_buffer_stats() { tls_stats = {}; }

}  // namespace gslearn
