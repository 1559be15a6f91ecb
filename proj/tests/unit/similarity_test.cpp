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

#include <doctest.h>

#include <cmath>
#include <vector>

#include "gslearn/error.hpp"
#include "gslearn/similarity.hpp"
#include "oracles.hpp"

using namespace gslearn;
using namespace gslearn::testing;

namespace {

EmbeddingMatrix unit(const Matrix& m) { return {constant(m), true}; }

// Brute-force softmax of one score row.
std::vector<double> softmax_ref(const std::vector<double>& s) {
  double mx = s[0];
  for (double v : s) mx = std::max(mx, v);
  double total = 0.0;
  std::vector<double> out;
  for (double v : s) {
    out.push_back(std::exp(v - mx));
    total += out.back();
  }
  for (double& v : out) v /= total;
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TEST_SUITE("similarity") {

TEST_CASE("kernel names round-trip") {
  for (Kernel k : {Kernel::lin, Kernel::diff, Kernel::gau, Kernel::neuralgau, Kernel::heat})
    CHECK(parse_kernel(kernel_name(k)) == k);
  CHECK_THROWS_AS(parse_kernel("cosine"), ConfigError);
}

TEST_CASE("linsim rows are a softmax over inner products") {
  Rng rng(1);
  const Matrix z = unit_rows(8, 5, rng);
  const Matrix c = unit_rows(6, 5, rng);
  const Matrix pi = linsim(unit(z), unit(c)).pi.value();
  REQUIRE(pi.rows() == 8);
  REQUIRE(pi.cols() == 6);
  for (std::size_t i = 0; i < 8; ++i) {
    std::vector<double> s;
    for (std::size_t j = 0; j < 6; ++j) s.push_back(dot(z.row(i), c.row(j)));
    const auto ref = softmax_ref(s);
    for (std::size_t j = 0; j < 6; ++j) CHECK(std::abs(pi(i, j) - ref[j]) < 1e-12);
    CHECK(std::abs(row_sum(pi, i) - 1.0) < 1e-9);
  }
  const Matrix e{{1, 0}, {0, 1}};
  const Matrix p = linsim(unit(e), unit(e)).pi.value();
  CHECK(p(0, 0) == doctest::Approx(std::exp(1.0) / (std::exp(1.0) + 1.0)));
}

TEST_CASE("diffsim score is one minus the inner product on unit rows") {
  Rng rng(2);
  const Matrix z = unit_rows(30, 7, rng);
  const Matrix c = unit_rows(20, 7, rng);
  const Matrix s = difference_scores(constant(z), constant(c)).value();
  double worst = 0.0;
  for (std::size_t i = 0; i < 30; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      worst = std::max(worst, std::abs(s(i, j) - (1.0 - dot(z.row(i), c.row(j)))));
  CHECK(worst < 1e-9);

  // Probability falls as similarity rises: ordering is reversed from linsim.
  const Matrix e{{1, 0}, {0.6, 0.8}, {0, 1}};
  const Matrix d = diffsim(unit(e), unit(e)).pi.value();
  CHECK(d(0, 2) > d(0, 1));
  CHECK(d(0, 1) > d(0, 0));
  CHECK_THROWS_AS(diffsim(EmbeddingMatrix{constant(e), false}, unit(e)), ContractError);
  CHECK_THROWS_AS(diffsim(EmbeddingMatrix{constant(Matrix{{2, 0}}), true}, unit(e)), ContractError);
}

TEST_CASE("gaussian kernel peak and symmetry") {
  CHECK(gaussian_value(0.5, 0.5, 0.05) == 1.0);
  for (double delta : {0.01, 0.1, 0.3, 0.5}) {
    CHECK(std::abs(gaussian_value(0.5 + delta, 0.5, 0.05) - gaussian_value(0.5 - delta, 0.5, 0.05)) <
          1e-12);
  }
  CHECK(gaussian_value(0.5, 0.5, 0.05) > gaussian_value(1.0, 0.5, 0.05));
  CHECK(gaussian_value(0.5, 0.5, 0.05) > gaussian_value(-0.2, 0.5, 0.05));

  const Matrix e{{1, 0}, {0.6, 0.8}};
  CHECK_THROWS_AS(gausim(unit(e), unit(e), FixedGaussian{0.5, 0.0}), ConfigError);
  CHECK_THROWS_AS(gausim(unit(e), unit(e), FixedGaussian{0.5, -1.0}), ConfigError);

  // Mid-similarity candidates beat the nearest one.
  const Matrix c{{1, 0}, {0.5, std::sqrt(0.75)}, {-1, 0}};
  const Matrix p = gausim(unit(Matrix{{1, 0}}), unit(c), FixedGaussian{0.5, 0.05}).pi.value();
  CHECK(p(0, 1) > p(0, 0));
  CHECK(p(0, 1) > p(0, 2));
}

TEST_CASE("neural gaussian with zero vectors equals the fixed gaussian at b=0.5 c=0.05") {
  Rng rng(3);
  const Matrix z = unit_rows(25, 6, rng);
  const Matrix c = unit_rows(10, 6, rng);
  const NeuralGaussian zero = NeuralGaussian::zeros(6, 0.1);
  const NeuralGaussianOutput ng = neural_gausim(unit(z), unit(c), zero);
  const Matrix fixed = gausim(unit(z), unit(c), FixedGaussian{0.5, 0.05}).pi.value();
  CHECK(max_abs_diff(ng.similarity.pi.value(), fixed) < 1e-9);
  for (double v : ng.b.value().values()) CHECK(v == doctest::Approx(0.5));
  for (double v : ng.c.value().values()) CHECK(v == doctest::Approx(0.05));
}

TEST_CASE("neural gaussian widths are floored and shapes checked") {
  Rng rng(4);
  const Matrix z = unit_rows(5, 3, rng);
  NeuralGaussian p = NeuralGaussian::zeros(3, 0.1);
  p.w_c = constant(Matrix{{-1e4, -1e4, -1e4}});
  const auto out = neural_gausim(unit(z), unit(z), p);
  CHECK(all_finite(out.similarity.pi.value()));
  NeuralGaussian wrong = NeuralGaussian::zeros(4, 0.1);
  CHECK_THROWS_AS(neural_gausim(unit(z), unit(z), wrong), DimensionError);
}

TEST_CASE("kernel gradients match finite differences") {
  Rng rng(5);
  const Matrix w = random_matrix(6, 4, rng);
  for (Kernel k : {Kernel::lin, Kernel::diff, Kernel::gau, Kernel::neuralgau}) {
    CAPTURE(kernel_name(k));
    Var x = parameter(random_matrix(6, 3, rng));
    Var cx = parameter(random_matrix(4, 3, rng));
    NeuralGaussian ng = NeuralGaussian::glorot(3, 0.1, rng);
    const KernelSpec spec{k, {0.3, 0.2}, 1.0, false};
    auto loss = [&] {
      const EmbeddingMatrix z{row_l2_normalize(x), true};
      const EmbeddingMatrix c{row_l2_normalize(cx), true};
      return weighted_sum(evaluate_kernel(spec, z, c, &ng).similarity.pi, w);
    };
    CHECK(gradient_check_params({x, cx, ng.w_b, ng.w_c}, loss) < 1e-4);
  }
}

TEST_CASE("heat kernel") {
  CHECK(heat_value_normalized(1.0, 1.0) == 1.0);
  CHECK(heat_value_normalized(0.0, 2.0) == doctest::Approx(std::exp(-1.0)));
  const Matrix x{{0, 0}, {3, 4}};
  const Matrix phi = heat_scores(constant(x), constant(x), 5.0).value();
  CHECK(phi(0, 1) == doctest::Approx(std::exp(-5.0)));
  CHECK(phi(1, 1) == doctest::Approx(1.0));
  CHECK_THROWS_AS(heat_kernel(constant(x), 0.0), ConfigError);

  Rng rng(6);
  Var a = parameter(random_matrix(4, 3, rng));
  const Matrix w = random_matrix(4, 4, rng);
  CHECK(gradient_check_params({a}, [&] { return weighted_sum(heat_kernel(a, 2.0).pi, w); }) < 1e-4);
}

TEST_CASE("mask_self zeroes the diagonal exactly") {
  Rng rng(7);
  const Matrix z = unit_rows(9, 4, rng);
  const EmbeddingMatrix e = unit(z);
  for (Kernel k : {Kernel::lin, Kernel::diff, Kernel::gau}) {
    const KernelSpec spec{k, {}, 1.0, true};
    const Matrix pi = evaluate_kernel(spec, e, e, nullptr).similarity.pi.value();
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(pi(i, i) == 0.0);
      CHECK(std::abs(row_sum(pi, i) - 1.0) < 1e-9);
    }
  }
  CHECK_THROWS_AS(linsim(e, unit(unit_rows(3, 4, rng)), {.mask_self = true}), DimensionError);
}

TEST_CASE("encoder embeddings") {
  Rng rng(8);
  const MlpEncoder enc = MlpEncoder::glorot(5, 7, 2, true, rng);
  CHECK(enc.depth() == 2);
  CHECK(enc.input_dim() == 5);
  CHECK(enc.output_dim() == 7);
  const EmbeddingMatrix z = embed(constant(random_matrix(10, 5, rng)), enc);
  CHECK(z.normalized);
  for (std::size_t i = 0; i < 10; ++i) {
    double sq = 0.0;
    for (double v : z.z.value().row(i)) sq += v * v;
    CHECK((sq == 0.0 || std::abs(sq - 1.0) < 1e-9));
  }
  const Matrix x = random_matrix(4, 3, rng);
  CHECK(embed(constant(x), MlpEncoder::identity(3, false)).z.value() == x);
  CHECK_THROWS_AS(embed(constant(x), enc), ConfigError);
  CHECK_THROWS_AS(MlpEncoder::glorot(5, 7, 0, true, rng), ConfigError);
}

TEST_CASE("buffer accounting records the score shape") {
  Rng rng(9);
  reset_similarity_buffer_stats();
  const Matrix z = unit_rows(40, 4, rng);
  const Matrix c = unit_rows(7, 4, rng);
  linsim(unit(z), unit(c));
  const SimilarityBufferStats st = similarity_buffer_stats();
  CHECK(st.peak_entries == 280);
  CHECK(st.last_rows == 40);
  CHECK(st.last_cols == 7);
  CHECK(st.evaluations >= 1);
}

}  // TEST_SUITE
