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

#include "gslearn/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Core>

#include "gslearn/error.hpp"

namespace gslearn {
namespace {

constexpr double kLogFloor = 1e-12;

using ArrayMap = Eigen::Map<Eigen::ArrayXd>;
using ConstArrayMap = Eigen::Map<const Eigen::ArrayXd>;

ConstArrayMap as_array(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}
ArrayMap as_array(std::span<double> v) { return {v.data(), static_cast<Eigen::Index>(v.size())}; }

// y = softmax((logits + noise) / tau), written into out. Empty noise means g = 0.
void relaxed_row(std::span<const double> log_pi, std::span<const double> noise, double tau,
                 std::span<double> out) {
  ArrayMap y = as_array(out);
  if (noise.empty()) {
    y = as_array(log_pi) / tau;
  } else {
    y = (as_array(log_pi) + as_array(noise)) / tau;
  }
  y = (y - y.maxCoeff()).exp();
  y /= y.sum();
}

std::size_t argmax(std::span<const double> v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

RelaxedAdjacency relaxed_sample(const Var& pi, const RelaxOptions& options, const Rng& rng) {
  if (!(options.tau > 0.0)) {
    throw ConfigError("relaxed_sample: temperature must be > 0, got " +
                      std::to_string(options.tau));
  }
  if (options.draws < 1) throw ConfigError("relaxed_sample: need at least one draw");

  const Matrix& p = pi.value();
  const std::size_t n = p.rows();
  const std::size_t cols = p.cols();
  const bool noisy = options.noise == NoiseMode::gumbel;
  // Without noise every draw is the same vector.
  const std::size_t distinct = noisy ? options.draws : 1;
  const bool keep = pi.requires_grad();
  const double tau = options.tau;
  const double inv_draws = 1.0 / static_cast<double>(distinct);

  Matrix out(n, cols);
  // soft[k] holds draw k for every row when a backward pass will need it.
  std::vector<Matrix> soft(keep ? distinct : 0, Matrix(keep ? n : 0, keep ? cols : 0));

#ifdef GSLEARN_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(n); ++si) {
    const std::size_t i = static_cast<std::size_t>(si);
    std::vector<double> log_pi(cols);
    as_array(std::span<double>(log_pi)) = as_array(p.row(i)).max(kLogFloor).log();
    std::vector<double> noise(noisy ? cols : 0);
    std::vector<double> y(cols);
    Rng row_rng = rng.split(i);
    auto acc = out.row(i);
    for (std::size_t k = 0; k < distinct; ++k) {
      row_rng.fill_gumbel(noise);
      relaxed_row(log_pi, noise, tau, y);
      if (options.straight_through) {
        acc[argmax(y)] += inv_draws;
      } else {
        for (std::size_t j = 0; j < cols; ++j) acc[j] += y[j] * inv_draws;
      }
      if (keep) std::copy(y.begin(), y.end(), soft[k].row(i).begin());
    }
  }

  Var a = make_op(std::move(out), {pi},
                  [soft = std::move(soft), tau, inv_draws](DiffNode& self) {
                    const Matrix& p = self.parents()[0].value();
                    const Matrix& g = self.grad();
                    Matrix dp(p.rows(), p.cols());
#ifdef GSLEARN_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
                    for (std::ptrdiff_t si = 0; si < static_cast<std::ptrdiff_t>(p.rows()); ++si) {
                      const std::size_t i = static_cast<std::size_t>(si);
                      const auto gr = g.row(i);
                      auto dr = dp.row(i);
                      for (const Matrix& draw : soft) {
                        const auto y = draw.row(i);
                        double dot = 0.0;
                        for (std::size_t j = 0; j < y.size(); ++j) dot += y[j] * gr[j];
                        for (std::size_t j = 0; j < y.size(); ++j)
                          dr[j] += y[j] * (gr[j] - dot) * inv_draws;
                      }
                      for (std::size_t j = 0; j < dr.size(); ++j) {
                        const double pij = p(i, j);
                        dr[j] = pij > kLogFloor ? dr[j] / (tau * pij) : 0.0;
                      }
                    }
                    self.accumulate_parent(0, dp);
                  });
  return {a, options.draws, tau};
}

Matrix hard_knn(const Matrix& scores, std::size_t k) {
  if (k == 0 || k > scores.cols()) {
    throw ConfigError("hard_knn: k=" + std::to_string(k) + " with " +
                      std::to_string(scores.cols()) + " candidates");
  }
  Matrix out(scores.rows(), scores.cols());
  std::vector<std::size_t> idx(scores.cols());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const auto row = scores.row(i);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        return row[a] > row[b] || (row[a] == row[b] && a < b);
                      });
    for (std::size_t r = 0; r < k; ++r) out(i, idx[r]) = 1.0;
  }
  return out;
}

std::vector<double> entropy_profile(std::span<const double> pi_row, std::span<const double> taus,
                                    std::size_t draws, const Rng& rng) {
  for (double t : taus) {
    if (!(t > 0.0)) throw ConfigError("entropy_profile: temperatures must be > 0");
  }
  const std::size_t cols = pi_row.size();
  std::vector<double> log_pi(cols);
  for (std::size_t j = 0; j < cols; ++j) log_pi[j] = std::log(std::max(pi_row[j], kLogFloor));

  std::vector<double> entropy(taus.size(), 0.0);
  Rng noise_rng = rng;
  std::vector<double> noise(cols);
  std::vector<double> y(cols);
  for (std::size_t d = 0; d < draws; ++d) {
    for (double& g : noise) g = noise_rng.gumbel();
    for (std::size_t t = 0; t < taus.size(); ++t) {
      relaxed_row(log_pi, noise, taus[t], y);
      double h = 0.0;
      for (double v : y)
        if (v > 0.0) h -= v * std::log(v);
      entropy[t] += h;
    }
  }
  if (draws > 0)
    for (double& h : entropy) h /= static_cast<double>(draws);
  return entropy;
}

}  // namespace gslearn
