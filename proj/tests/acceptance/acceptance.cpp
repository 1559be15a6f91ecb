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

// Acceptance run: one PASS/FAIL line per criterion.
//
//   gslearn_acceptance [--report] [--only 1,3,7] [--out DIR]
//
// Without --report the exit code is 1 when any criterion fails. With it, the
// exit code only flags crashes, so every line is always printed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fixtures.hpp"
#include "gslearn/analysis.hpp"
#include "gslearn/error.hpp"
#include "gslearn/parallel.hpp"
#include "gslearn/sampler.hpp"
#include "gslearn/trainer.hpp"
#include "oracles.hpp"

using namespace gslearn;
using namespace gslearn::testing;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

enum class Verdict { pass, fail, skip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Deterministic artifacts of each criterion, compared by the determinism check.
using Artifacts = std::map<std::string, std::string>;

void save(const fs::path& dir, const std::string& name, const std::string& text) {
  if (dir.empty()) return;
  fs::create_directories(dir);
  std::ofstream(dir / name, std::ios::trunc) << text;
}

// ---- 1 ---------------------------------------------------------------------

Outcome gradient_fidelity(Artifacts& art) {
  const auto t0 = Clock::now();
  const Dataset ds = tiny_dataset();
  const SplitMasks sp = make_splits(ds.num_nodes(), 0);
  double worst = 0.0;
  std::string where;
  std::ostringstream log;
  for (Mode mode : {Mode::full, Mode::transition}) {
    for (Kernel k : {Kernel::lin, Kernel::diff, Kernel::gau, Kernel::neuralgau}) {
      GslModel m(tiny_config(k, mode), 12, 5, 3);
      const Rng noise(3);
      auto loss = [&] {
        return cross_entropy(m.forward(ds.features, noise, true).logits, ds.labels, sp.train);
      };
      const double err = gradient_check_params(m.parameters(), loss);
      log << mode_name(mode) << ',' << kernel_name(k) << ',' << format_double(err) << '\n';
      if (err > worst) {
        worst = err;
        where = std::string(kernel_name(k)) + "/" + std::string(mode_name(mode));
      }
    }
  }
  art["gradients.csv"] = log.str();
  const double secs = seconds_since(t0);
  const bool ok = worst < 1e-3 && secs < 60.0;
  return {ok ? Verdict::pass : Verdict::fail,
          "worst relative error " + fmt("%.2e", worst) + " at " + where + " (< 1e-3), " +
              fmt("%.1f", secs) + " s (< 60 s)"};
}

// ---- 2 ---------------------------------------------------------------------

Outcome aggregation_bound(Artifacts& art) {
  const auto t0 = Clock::now();
  const Theorem1Report r = theorem1_suite(Theorem1Options{});
  const double secs = seconds_since(t0);
  art["theorem1.csv"] = theorem1_csv(r);
  const bool ok = r.total_violations == 0 && r.total_infeasible == 0 &&
                  r.total_trials >= 10000 && secs < 30.0;
  return {ok ? Verdict::pass : Verdict::fail,
          std::to_string(r.total_trials) + " trials over " + std::to_string(r.rows.size()) +
              " configurations, " + std::to_string(r.total_violations) + " violations, " +
              std::to_string(r.total_infeasible) + " infeasible, " + fmt("%.1f", secs) +
              " s (< 30 s)"};
}

// ---- 3 ---------------------------------------------------------------------

Outcome simplex_invariants(Artifacts& art) {
  Rng meta(2024);
  double worst_pi = 0.0, worst_a = 0.0;
  std::ostringstream log;
  for (int trial = 0; trial < 100; ++trial) {
    const Kernel kernels[] = {Kernel::lin, Kernel::diff, Kernel::gau, Kernel::neuralgau};
    const Kernel k = kernels[meta.below(4)];
    const std::size_t n = 2 + meta.below(60);
    const std::size_t s = 1 + meta.below(40);
    const std::size_t m = 2 + meta.below(10);
    const double tau = 0.05 + 1.95 * meta.uniform();
    const std::size_t draws = 1 + meta.below(25);
    const std::uint64_t seed = meta.next_u64();
    Rng rng(seed);
    const EmbeddingMatrix z{constant(unit_rows(n, m, rng)), true};
    const EmbeddingMatrix c{constant(unit_rows(s, m, rng)), true};
    const NeuralGaussian ng = NeuralGaussian::glorot(m, 0.1, rng);
    const KernelOutput ko = evaluate_kernel(KernelSpec{k, {}, 1.0, false}, z, c, &ng);
    const RelaxedAdjacency a =
        relaxed_sample(ko.similarity, {tau, draws, NoiseMode::gumbel, false}, rng);
    for (std::size_t i = 0; i < n; ++i) {
      worst_pi = std::max(worst_pi, std::abs(row_sum(ko.similarity.pi.value(), i) - 1.0));
      worst_a = std::max(worst_a, std::abs(row_sum(a.a.value(), i) - 1.0));
    }
    log << kernel_name(k) << ',' << n << ',' << s << ',' << format_double(tau) << ',' << draws
        << ',' << format_double(sum(a.a.value())) << '\n';
  }
  art["simplex.csv"] = log.str();
  const bool ok = worst_pi <= 1e-6 && worst_a <= 1e-6;
  return {ok ? Verdict::pass : Verdict::fail,
          "100 configurations, max |row sum - 1|: pi " + fmt("%.1e", worst_pi) + ", A " +
              fmt("%.1e", worst_a) + " (<= 1e-6)"};
}

// ---- 4 ---------------------------------------------------------------------

Outcome kernel_identities(Artifacts& art) {
  Rng rng(4);
  const Matrix z = unit_rows(64, 16, rng);
  const Matrix c = unit_rows(48, 16, rng);

  double dev_a = 0.0;
  const Matrix diff = difference_scores(constant(z), constant(c)).value();
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < c.rows(); ++j) {
      double dot = 0.0;
      for (std::size_t e = 0; e < z.cols(); ++e) dot += z(i, e) * c(j, e);
      dev_a = std::max(dev_a, std::abs(diff(i, j) - (1.0 - dot)));
    }
  }

  const EmbeddingMatrix ze{constant(z), true}, ce{constant(c), true};
  const Matrix neural = neural_gausim(ze, ce, NeuralGaussian::zeros(16, 0.1)).similarity.pi.value();
  const Matrix fixed = gausim(ze, ce, FixedGaussian{0.5, 0.05}).pi.value();
  const double dev_b = max_abs_diff(neural, fixed);

  double dev_c = std::abs(gaussian_value(0.5, 0.5, 0.05) - 1.0);
  for (double b : {-0.5, 0.0, 0.3, 0.5, 0.9}) {
    for (double cw : {0.01, 0.05, 0.5}) {
      dev_c = std::max(dev_c, std::abs(gaussian_value(b, b, cw) - 1.0));
      for (double d : {1e-3, 0.05, 0.2, 0.7}) {
        dev_c = std::max(dev_c, std::abs(gaussian_value(b + d, b, cw) - gaussian_value(b - d, b, cw)));
      }
    }
  }
  art["identities.txt"] = format_double(dev_a) + ' ' + format_double(dev_b) + ' ' + format_double(dev_c);
  const bool ok = dev_a < 1e-9 && dev_b < 1e-9 && dev_c <= 1e-12;
  return {ok ? Verdict::pass : Verdict::fail,
          "(a) diffsim vs 1 - <z,c> " + fmt("%.1e", dev_a) + " (< 1e-9); (b) zero-parameter neuralgau vs gau(0.5, 0.05) " +
              fmt("%.1e", dev_b) + " (< 1e-9); (c) peak and symmetry " + fmt("%.1e", dev_c) + " (<= 1e-12)"};
}

// ---- 5 ---------------------------------------------------------------------

Outcome mode_equivalence(Artifacts& art) {
  const Dataset ds = tiny_dataset();
  std::size_t checked = 0, equal = 0;
  std::ostringstream log;
  for (Kernel k : {Kernel::lin, Kernel::diff, Kernel::gau, Kernel::neuralgau}) {
    ModelConfig trans_cfg = tiny_config(k, Mode::transition, 7);
    trans_cfg.transition_nodes = ds.num_nodes();
    trans_cfg.shared_transition = true;
    const GslModel full(tiny_config(k, Mode::full, 7), 12, 5, 3);
    GslModel trans(trans_cfg, 12, 5, 3);
    trans.set_identity_projections();
    for (bool training : {false, true}) {
      const Matrix a = full.forward(ds.features, Rng(1), training).logits.value();
      const Matrix b = trans.forward(ds.features, Rng(1), training).logits.value();
      ++checked;
      equal += a == b;
      log << kernel_name(k) << ',' << training << ',' << format_double(max_abs_diff(a, b)) << '\n';
    }
  }
  art["equivalence.csv"] = log.str();
  return {equal == checked ? Verdict::pass : Verdict::fail,
          std::to_string(equal) + "/" + std::to_string(checked) +
              " kernel x {inference, training} logit matrices bitwise equal"};
}

// ---- 6 ---------------------------------------------------------------------

Outcome complexity(Artifacts& art) {
  const auto t0 = Clock::now();
  ComplexityOptions opt;  // n in {1000, 2000, 4000}, s = 500
  const auto trans = complexity_probe(opt);
  opt.mode = Mode::full;
  opt.repeats = 2;
  const auto full = complexity_probe(opt);
  const double secs = seconds_since(t0);

  bool buffers = true;
  double worst_growth = 0.0;
  std::ostringstream log;
  for (std::size_t r = 0; r < trans.size(); ++r) {
    buffers = buffers && trans[r].buffer_entries == trans[r].n * 500 &&
              full[r].buffer_entries == full[r].n * full[r].n;
    if (r > 0) worst_growth = std::max(worst_growth, trans[r].growth_ratio);
    log << trans[r].n << ',' << trans[r].buffer_entries << ',' << full[r].buffer_entries << '\n';
  }
  art["complexity_buffers.csv"] = log.str();  // timings are not deterministic
  const bool ok = buffers && worst_growth <= 2.3 && secs < 120.0;
  return {ok ? Verdict::pass : Verdict::fail,
          std::string("buffers ") + (buffers ? "n*s / n^2 exactly" : "MISMATCH") +
              "; transition time growth per doubling max " + fmt("%.2f", worst_growth) +
              "x (<= 2.3x); " + fmt("%.1f", secs) + " s (< 120 s)"};
}

// ---- 7, 8 ------------------------------------------------------------------

struct BlobRun {
  TrainResult result;
  std::string metrics;
  double seconds = 0.0;
};

BlobRun train_blobs(const ModelConfig& config) {
  const Dataset ds = blob_dataset();
  const SplitMasks sp = make_splits(ds.num_nodes(), 0);
  const auto t0 = Clock::now();
  GslModel model(config, ds.num_nodes(), ds.num_features(), ds.num_classes);
  TrainResult r = train(model, ds, sp);
  const double secs = seconds_since(t0);
  return {r, metrics_json(model, ds, r), secs};
}

ModelConfig blob_config(Kernel kernel, std::size_t k, std::uint64_t seed) {
  ModelConfig c;
  c.kernel = kernel;
  c.mode = Mode::transition;
  c.k = k;
  c.seed = seed;
  c.epochs = 300;
  return c;
}

Outcome synthetic_learning(Artifacts& art) {
  const Dataset ds = blob_dataset();
  const SplitMasks sp = make_splits(ds.num_nodes(), 0);
  const double oracle = one_nn_accuracy(ds, sp.train, sp.test);
  const BlobRun run = train_blobs(blob_config(Kernel::neuralgau, 5, 0));
  art["blobs_neuralgau_t.json"] = run.metrics;
  const double acc = run.result.best.test_accuracy;
  const bool ok = acc >= 0.95 && run.seconds < 120.0;
  return {ok ? Verdict::pass : Verdict::fail,
          "NeuralGauSim-T test accuracy " + fmt("%.4f", acc) + " (>= 0.95) at best epoch " +
              std::to_string(run.result.best_epoch) + " of " + std::to_string(run.result.epochs_run) +
              ", " + fmt("%.1f", run.seconds) + " s (< 120 s); 1-NN oracle " + fmt("%.4f", oracle)};
}

Outcome k_robustness(Artifacts& art, bool reduced) {
  const std::vector<std::uint64_t> seeds = reduced ? std::vector<std::uint64_t>{0}
                                                   : std::vector<std::uint64_t>{0, 1, 2, 3, 4};
  auto mean_acc = [&](Kernel kernel, std::size_t k) {
    double total = 0.0;
    for (std::uint64_t seed : seeds) {
      const BlobRun run = train_blobs(blob_config(kernel, k, seed));
      art["blobs_" + std::string(kernel_name(kernel)) + "_k" + std::to_string(k) + "_seed" +
          std::to_string(seed) + ".json"] = run.metrics;
      total += run.result.best.test_accuracy;
    }
    return total / static_cast<double>(seeds.size());
  };
  const double gau5 = mean_acc(Kernel::gau, 5), gau20 = mean_acc(Kernel::gau, 20);
  const double lin5 = mean_acc(Kernel::lin, 5), lin20 = mean_acc(Kernel::lin, 20);
  const double gau_delta = 100.0 * (gau20 - gau5);
  const double lin_delta = 100.0 * (lin20 - lin5);
  return {gau_delta >= -2.0 ? Verdict::pass : Verdict::fail,
          "GauSim-T K20-K5 " + fmt("%+.2f", gau_delta) + " points (>= -2), means " + fmt("%.4f", gau5) +
              " -> " + fmt("%.4f", gau20) + "; LinSim-T " + fmt("%+.2f", lin_delta) + " points, means " +
              fmt("%.4f", lin5) + " -> " + fmt("%.4f", lin20) + "; " + std::to_string(seeds.size()) +
              " seeds"};
}

// ---- 9 ---------------------------------------------------------------------

Outcome citeseer_stretch(Artifacts&) {
  const char* manifest = std::getenv("GSLEARN_CITESEER_MANIFEST");
  if (manifest == nullptr || *manifest == '\0') {
    return {Verdict::skip, "set GSLEARN_CITESEER_MANIFEST to a converted CiteSeer manifest to run"};
  }
  const Dataset ds = load_dataset(manifest);
  const SplitMasks sp = ds.splits ? *ds.splits : make_splits(ds.num_nodes(), 0);
  ModelConfig c;
  c.lr = 0.01;
  const auto t0 = Clock::now();
  GslModel model(c, ds.num_nodes(), ds.num_features(), ds.num_classes);
  const TrainResult r = train(model, ds, sp);
  const double secs = seconds_since(t0);
  const bool ok = r.best.test_accuracy >= 0.65 && secs < 900.0;
  return {ok ? Verdict::pass : Verdict::fail,
          "NeuralGauSim-T test accuracy " + fmt("%.4f", r.best.test_accuracy) + " (>= 0.65), " +
              fmt("%.0f", secs) + " s (< 900 s)"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome(Artifacts&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  CLI::App app{"gslearn acceptance criteria"};
  bool report = false;
  std::vector<int> only;
  std::string out;
  app.add_flag("--report", report, "Exit 0 even when a criterion fails");
  app.add_option("--only", only, "Comma-separated criterion ids")->delimiter(',');
  app.add_option("--out", out, "Directory for the metrics artifacts");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "gradient fidelity", gradient_fidelity},
      {2, "aggregation bound suite", aggregation_bound},
      {3, "simplex invariants", simplex_invariants},
      {4, "kernel identities", kernel_identities},
      {5, "mode equivalence", mode_equivalence},
      {6, "complexity", complexity},
      {7, "synthetic learning", synthetic_learning},
      {8, "K-robustness direction", [](Artifacts& a) { return k_robustness(a, false); }},
      {9, "CiteSeer stretch", citeseer_stretch},
  };
  const std::set<int> selected(only.begin(), only.end());
  auto wanted = [&](int id) { return selected.empty() || selected.contains(id); };

  int failures = 0;
  auto print = [&](int id, const char* name, const Outcome& o) {
    const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
    std::printf("%s  criterion %d  %s: %s\n", tag, id, name, o.detail.c_str());
    std::fflush(stdout);
    failures += o.verdict == Verdict::fail;
  };

  Artifacts first;
  try {
    for (const Criterion& c : criteria) {
      if (!wanted(c.id)) continue;
      Artifacts art;
      const Outcome o = c.run(art);
      for (auto& [name, text] : art) {
        save(out.empty() ? fs::path{} : fs::path(out) / "run1", name, text);
        first[name] = text;
      }
      print(c.id, c.name, o);
    }

    if (wanted(10)) {
      // Second pass over criteria 1-8 with the same seeds. Criterion 8 is
      // repeated on its first seed only; its metrics files are compared for
      // that seed.
      Artifacts second;
      std::size_t compared = 0;
      std::vector<std::string> differing;
      for (const Criterion& c : criteria) {
        if (c.id > 8 || !wanted(c.id)) continue;
        if (c.id == 8) {
          k_robustness(second, true);
        } else {
          c.run(second);
        }
      }
      for (const auto& [name, text] : second) {
        save(out.empty() ? fs::path{} : fs::path(out) / "run2", name, text);
        const auto it = first.find(name);
        if (it == first.end()) continue;
        ++compared;
        if (it->second != text) differing.push_back(name);
      }
      Outcome o{differing.empty() && compared > 0 ? Verdict::pass : Verdict::fail,
                std::to_string(compared) + " artifacts compared across two runs, " +
                    std::to_string(differing.size()) + " differ"};
      for (const auto& d : differing) o.detail += " [" + d + "]";
      print(10, "determinism", o);
    }
  } catch (const std::exception& e) {
    std::printf("ERROR  acceptance aborted: %s\n", e.what());
    return 2;
  }
  return failures > 0 && !report ? 1 : 0;
}
