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

#include "commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gslearn/analysis.hpp"
#include "gslearn/checkpoint.hpp"
#include "gslearn/error.hpp"
#include "gslearn/trainer.hpp"

namespace gslearn::cli {
namespace fs = std::filesystem;
namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

// Empty target means stdout.
void emit(const std::string& target, const std::string& text) {
  if (target.empty()) {
    std::cout << text;
  } else {
    write_text(target, text);
  }
}

GslModel load_for(const std::string& checkpoint, const Dataset& ds) {
  GslModel model = load_checkpoint(checkpoint);
  check_compatible(model, ds);
  if (model.config().mode == Mode::knn) model.build_knn_graph(ds.features);
  return model;
}

}  // namespace

ModelConfig ModelFlags::resolve() const {
  ModelConfig c = config_file.empty() ? ModelConfig{} : config_from_json(slurp(config_file));
  if (kernel) c.kernel = parse_kernel(*kernel);
  if (mode) c.mode = parse_mode(*mode);
  if (k) c.k = *k;
  if (s) c.transition_nodes = *s;
  if (hidden) c.hidden = *hidden;
  if (embed_dim) c.embed_dim = *embed_dim;
  if (encoder_depth) c.encoder_depth = *encoder_depth;
  if (epochs) c.epochs = *epochs;
  if (patience) c.patience = *patience;
  if (tau) c.tau = *tau;
  if (lr) c.lr = *lr;
  if (dropout) c.dropout = *dropout;
  if (c_scale) c.c_scale = *c_scale;
  if (gausim_b) c.gausim_b = *gausim_b;
  if (gausim_c) c.gausim_c = *gausim_c;
  if (heat_t) c.heat_t = *heat_t;
  if (seed) c.seed = *seed;
  c.self_loop = c.self_loop || self_loop;
  c.mask_self = c.mask_self || mask_self;
  c.shared_transition = c.shared_transition || shared_transition;
  c.anchors_random = c.anchors_random || anchors_random;
  c.straight_through = c.straight_through || straight_through;
  if (raw_features) c.normalize_features = false;
  if (raw_embeddings) c.normalize_embeddings = false;
  validate(c);
  return c;
}

Dataset load_source(const DataSource& src) {
  if (src.dataset.empty() == src.synth.empty()) {
    throw UsageError("give exactly one of --dataset or --synth");
  }
  if (!src.dataset.empty()) return load_dataset(src.dataset);
  return synth_blobs(parse_blob_spec(src.synth));
}

SplitMasks splits_for(const Dataset& ds, std::uint64_t seed) {
  if (ds.splits) {
    check_splits(*ds.splits, ds.num_nodes());
    return *ds.splits;
  }
  return make_splits(ds.num_nodes(), seed);
}

int run_train(const TrainArgs& a) {
  // Flags are validated before the dataset is even read.
  const ModelConfig config = a.model.resolve();
  for (std::size_t k : a.k_sweep) {
    if (k == 0) throw UsageError("--k-sweep values must be >= 1");
  }
  const Dataset ds = load_source(a.data);
  const SplitMasks splits = splits_for(ds, config.seed);

  TrainOptions opts;
  if (a.verbose) {
    opts.on_epoch = [](const EpochRecord& r) {
      if (r.epoch == 1 || r.epoch % 10 == 0) {
        std::fprintf(stderr, "epoch %4zu  loss %.4f  train %.4f  val %.4f\n", r.epoch,
                     r.train_loss, r.train_accuracy, r.val_accuracy);
      }
    };
  }

  const fs::path out(a.out);
  fs::create_directories(out);
  if (!a.k_sweep.empty()) {
    const auto records = k_sweep(config, ds, splits, a.k_sweep, opts);
    write_text(out / "metrics.json", sweep_json(config, ds, records));
    for (const auto& r : records) {
      std::printf("k=%zu  best_epoch=%zu  test_accuracy=%.4f\n", r.k, r.result.best_epoch,
                  r.result.best.test_accuracy);
    }
    return 0;
  }

  GslModel model(config, ds.num_nodes(), ds.num_features(), ds.num_classes);
  const TrainResult result = train(model, ds, splits, opts);
  write_text(out / "metrics.json", metrics_json(model, ds, result));
  save_checkpoint(model, out / "checkpoint.gsl");
  std::printf("best_epoch=%zu  val_accuracy=%.4f  test_accuracy=%.4f\n", result.best_epoch,
              result.best.val_accuracy, result.best.test_accuracy);
  return 0;
}

int run_eval(const EvalArgs& a) {
  const Dataset ds = load_source(a.data);
  GslModel model = load_for(a.checkpoint, ds);
  if (a.remove_transition > 0) model.remove_transition_nodes(a.remove_transition);
  const SplitMasks splits = splits_for(ds, model.config().seed);
  emit(a.out, eval_json(model, ds, evaluate(model, ds, splits)));
  return 0;
}

int run_theorem1(const Theorem1Args& a) {
  Theorem1Options opt;
  opt.trials = a.trials;
  opt.seed = a.seed;
  const Theorem1Report report = theorem1_suite(opt);
  emit(a.out, theorem1_csv(report));
  std::fprintf(stderr, "theorem1: %zu trials, %zu violations, %zu infeasible\n",
               report.total_trials, report.total_violations, report.total_infeasible);
  return report.total_violations == 0 ? 0 : 1;
}

int run_curves(const CurveArgs& a) {
  const Kernel kernel = parse_kernel(a.kernel);
  const auto curve = curve_emit(kernel, {a.b, a.c, a.t}, linear_grid(-1.0, 1.0, a.points));
  const fs::path out(a.out);
  const std::string stem(kernel_name(kernel));
  write_text(out / (stem + ".csv"), curve_csv(curve));
  write_text(out / (stem + ".svg"), curve_svg(curve, stem + " score vs similarity"));
  return 0;
}

int run_params(const ParamsArgs& a) {
  const Dataset ds = load_source(a.data);
  const GslModel model = load_for(a.checkpoint, ds);
  emit(a.out, param_csv(param_distribution(model, ds.features)));
  return 0;
}

int run_structure(const StructureArgs& a) {
  const Dataset ds = load_source(a.data);
  const GslModel model = load_for(a.checkpoint, ds);
  const ForwardResult fwd = model.forward(ds.features, Rng(model.config().seed), false);
  const fs::path out(a.out);
  for (std::size_t l = 0; l < 2; ++l) {
    const fs::path file = out / ("layer" + std::to_string(l + 1) + ".tsv");
    const std::size_t edges = export_structure(fwd.layers[l].adjacency.value(), a.threshold, file);
    std::printf("%s: %zu edges\n", file.string().c_str(), edges);
  }
  return 0;
}

int run_complexity(const ComplexityArgs& a) {
  ComplexityOptions opt;
  opt.mode = parse_mode(a.mode);
  opt.kernel = parse_kernel(a.kernel);
  opt.ns = a.ns;
  opt.s = a.s;
  opt.repeats = a.repeats;
  emit(a.out, complexity_csv(complexity_probe(opt)));
  return 0;
}

int run_synth(const SynthArgs& a) {
  Dataset ds = synth_blobs(parse_blob_spec(a.spec));
  if (a.with_splits) ds.splits = make_splits(ds.num_nodes(), a.split_seed);
  const fs::path manifest = write_dataset(ds, a.out);
  std::printf("%s\n", manifest.string().c_str());
  return 0;
}

}  // namespace gslearn::cli
