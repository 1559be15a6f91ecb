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
#include "gslearn/model.hpp"
#include "gslearn/optim.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace gslearn;
using namespace gslearn::testing;

namespace {

constexpr Kernel kLearned[] = {Kernel::lin, Kernel::diff, Kernel::gau, Kernel::neuralgau};

}  // namespace

TEST_SUITE("model") {

TEST_CASE("end-to-end gradients match finite differences") {
  const Dataset ds = tiny_dataset();
  const SplitMasks sp = make_splits(ds.num_nodes(), 0);
  for (Mode mode : {Mode::full, Mode::transition}) {
    for (Kernel k : kLearned) {
      CAPTURE(mode_name(mode));
      CAPTURE(kernel_name(k));
      GslModel m(tiny_config(k, mode), 12, 5, 3);
      const Rng noise(3);
      auto loss = [&] {
        return cross_entropy(m.forward(ds.features, noise, true).logits, ds.labels, sp.train);
      };
      CHECK(gradient_check_params(m.parameters(), loss) < 1e-3);
    }
  }
}

TEST_CASE("transition mode with identity projections reproduces full mode bitwise") {
  const Dataset ds = tiny_dataset();
  for (Kernel k : kLearned) {
    CAPTURE(kernel_name(k));
    ModelConfig full_cfg = tiny_config(k, Mode::full, 11);
    ModelConfig trans_cfg = tiny_config(k, Mode::transition, 11);
    trans_cfg.transition_nodes = 12;
    trans_cfg.shared_transition = true;
    const GslModel full(full_cfg, 12, 5, 3);
    GslModel trans(trans_cfg, 12, 5, 3);
    trans.set_identity_projections();
    for (bool training : {false, true}) {
      const Rng rng(5);
      CHECK(full.forward(ds.features, rng, training).logits.value() ==
            trans.forward(ds.features, rng, training).logits.value());
    }
  }
  GslModel small(tiny_config(Kernel::lin, Mode::transition), 12, 5, 3);
  CHECK_THROWS_AS(small.set_identity_projections(), ContractError);
}

TEST_CASE("forward shapes and determinism") {
  const Dataset ds = tiny_dataset();
  for (Mode mode : {Mode::full, Mode::transition}) {
    GslModel m(tiny_config(Kernel::neuralgau, mode), 12, 5, 3);
    const ForwardResult a = m.forward(ds.features, Rng(1), true);
    CHECK(a.logits.rows() == 12);
    CHECK(a.logits.cols() == 3);
    const std::size_t cols = mode == Mode::full ? 12 : 4;
    for (const LayerTrace& t : a.layers) {
      CHECK(t.adjacency.cols() == cols);
      CHECK(t.b.rows() == 12);
      for (std::size_t i = 0; i < 12; ++i) CHECK(std::abs(row_sum(t.adjacency.value(), i) - 1.0) < 1e-6);
    }
    CHECK(m.forward(ds.features, Rng(1), true).logits.value() == a.logits.value());
    CHECK(m.forward(ds.features, Rng(2), true).logits.value() != a.logits.value());
    // Inference ignores the noise seed.
    CHECK(m.forward(ds.features, Rng(1), false).logits.value() ==
          m.forward(ds.features, Rng(2), false).logits.value());
  }
  GslModel m(tiny_config(Kernel::lin, Mode::full), 12, 5, 3);
  CHECK_THROWS_AS(m.forward(Matrix(12, 4), Rng(0), false), Error);
}

TEST_CASE("same seed gives the same parameters") {
  const GslModel a(tiny_config(Kernel::neuralgau, Mode::transition, 4), 12, 5, 3);
  const GslModel b(tiny_config(Kernel::neuralgau, Mode::transition, 4), 12, 5, 3);
  const GslModel c(tiny_config(Kernel::neuralgau, Mode::transition, 5), 12, 5, 3);
  const auto ma = a.named_matrices(), mb = b.named_matrices(), mc = c.named_matrices();
  REQUIRE(ma.size() == mb.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < ma.size(); ++i) {
    CHECK(ma[i].name == mb[i].name);
    CHECK(ma[i].var.value() == mb[i].var.value());
    any_diff = any_diff || ma[i].var.value() != mc[i].var.value();
  }
  CHECK(any_diff);
}

TEST_CASE("parameter inventory per mode") {
  const GslModel t(tiny_config(Kernel::neuralgau, Mode::transition), 12, 5, 3);
  CHECK(t.projector_count() == 2);
  ModelConfig shared = tiny_config(Kernel::lin, Mode::transition);
  shared.shared_transition = true;
  CHECK(GslModel(shared, 12, 5, 3).projector_count() == 1);

  ModelConfig anchors = tiny_config(Kernel::lin, Mode::transition);
  anchors.anchors_random = true;
  const GslModel a(anchors, 12, 5, 3);
  std::size_t frozen = 0;
  for (const auto& nm : a.named_matrices()) frozen += !nm.trainable;
  CHECK(frozen == 4);
  CHECK(a.parameters().size() == a.named_matrices().size() - 4);

  ModelConfig knn = tiny_config(Kernel::lin, Mode::knn);
  const GslModel k(knn, 12, 5, 3);
  // knn: only the GCN weights and biases train.
  CHECK(k.parameters().size() == 4);
}

TEST_CASE("knn graph") {
  const Dataset ds = tiny_dataset();
  ModelConfig c = tiny_config(Kernel::lin, Mode::knn);
  c.k = 3;
  GslModel m(c, 12, 5, 3);
  CHECK(!m.has_knn_graph());
  m.build_knn_graph(ds.features);
  CHECK(m.has_knn_graph());
  const Matrix a = m.forward(ds.features, Rng(0), false).layers[0].adjacency.value();
  for (std::size_t i = 0; i < 12; ++i) {
    std::size_t nz = 0;
    for (double v : a.row(i)) {
      if (v != 0.0) {
        ++nz;
        CHECK(v == doctest::Approx(1.0 / 3.0));
      }
    }
    CHECK(nz == 3);
  }
  c.mask_self = true;
  GslModel masked(c, 12, 5, 3);
  masked.build_knn_graph(ds.features);
  const Matrix am = masked.forward(ds.features, Rng(0), false).layers[0].adjacency.value();
  for (std::size_t i = 0; i < 12; ++i) CHECK(am(i, i) == 0.0);
}

TEST_CASE("self loops mix in the identity") {
  const Dataset ds = tiny_dataset();
  ModelConfig c = tiny_config(Kernel::lin, Mode::full);
  c.self_loop = true;
  const GslModel m(c, 12, 5, 3);
  const Matrix a = m.forward(ds.features, Rng(0), false).layers[0].adjacency.value();
  for (std::size_t i = 0; i < 12; ++i) {
    CHECK(a(i, i) >= 0.5);
    CHECK(std::abs(row_sum(a, i) - 1.0) < 1e-9);
  }
}

TEST_CASE("removing transition nodes") {
  const Dataset ds = tiny_dataset();
  GslModel m(tiny_config(Kernel::gau, Mode::transition), 12, 5, 3);
  m.remove_transition_nodes(1);
  CHECK(m.config().transition_nodes == 3);
  CHECK(m.forward(ds.features, Rng(0), false).layers[1].adjacency.cols() == 3);
  CHECK_THROWS_AS(m.remove_transition_nodes(3), ConfigError);
}

TEST_CASE("gcn layer picks either association order with the same value") {
  Rng rng(9);
  const Var a = constant(random_matrix(7, 3, rng));
  const Var f = constant(random_matrix(3, 6, rng));
  const Var w = constant(random_matrix(6, 2, rng));
  const Var b = constant(random_matrix(1, 2, rng));
  const Matrix ref = add_row_vector(matmul(matmul(a, f), w), b).value();
  CHECK(max_abs_diff(gcn_layer(a, f, w, b, false).value(), ref) < 1e-12);
  const Matrix act = gcn_layer(a, f, w, b, true).value();
  for (std::size_t e = 0; e < act.size(); ++e)
    CHECK(act.values()[e] == doctest::Approx(std::max(0.0, ref.values()[e])).epsilon(1e-12));
}

TEST_CASE("mean aggregation of unit neighbors") {
  const std::vector<double> h{1.0, 0.0};
  const AggregateResult r = theorem1_aggregate(h, Matrix{{1, 0}, {0, 1}});
  CHECK(r.aggregate[0] == doctest::Approx(0.5));
  CHECK(r.distance == doctest::Approx(std::sqrt(0.5)));
  CHECK_THROWS_AS(theorem1_aggregate(h, Matrix{{2, 0}}), ContractError);
  CHECK_THROWS_AS(theorem1_aggregate(std::vector<double>{0.5, 0.0}, Matrix{{1, 0}}), ContractError);
}

TEST_CASE("one Adam step lowers the training loss for most seeds") {
  BlobSpec spec;
  spec.per_class = 20;
  const Dataset ds = synth_blobs(spec);
  const SplitMasks sp = make_splits(ds.num_nodes(), 0);
  int improved = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    ModelConfig c;
    c.seed = seed;
    c.transition_nodes = 20;
    c.dropout = 0.0;
    GslModel m(c, ds.num_nodes(), ds.num_features(), ds.num_classes);
    const Rng noise(seed + 100);
    auto loss = [&] {
      return cross_entropy(m.forward(ds.features, noise, true).logits, ds.labels, sp.train);
    };
    std::vector<Var> params = m.parameters();
    AdamState st = make_adam_state(params, {.lr = 0.01});
    zero_grads(params);
    const Var l0 = loss();
    backward(l0);
    adam_step(params, st);
    improved += loss().value()(0, 0) < l0.value()(0, 0);
  }
  CHECK(improved >= 18);
}

}  // TEST_SUITE
