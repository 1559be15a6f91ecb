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

// gslearn command-line entry point.
//
// Exit codes: 0 success, 1 runtime failure (I/O, validation, checkpoint, or a
// failed internal check), 2 usage error (bad flags or flag combinations).

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gslearn/error.hpp"
#include "gslearn/parallel.hpp"

namespace {

using namespace gslearn::cli;

void add_source(CLI::App& cmd, DataSource& src) {
  auto* ds = cmd.add_option("--dataset", src.dataset, "Path to a dataset manifest.json");
  auto* sy = cmd.add_option("--synth", src.synth,
                            "Synthetic data, e.g. blobs:classes=3,per_class=200,dim=16");
  ds->excludes(sy);
  sy->excludes(ds);
}

void add_model_flags(CLI::App& cmd, ModelFlags& f) {
  cmd.add_option("--config", f.config_file, "JSON config file; explicit flags override it")
      ->check(CLI::ExistingFile);
  cmd.add_option("--kernel", f.kernel, "lin|diff|gau|neuralgau|heat (default neuralgau)");
  cmd.add_option("--mode", f.mode, "full|transition|knn (default transition)");
  cmd.add_option("--k", f.k, "Relaxed draws per node, or kNN size (default 5)");
  cmd.add_option("--tau", f.tau, "Gumbel-Softmax temperature (default 0.25)");
  cmd.add_option("--s", f.s, "Transition node count (default 500)");
  cmd.add_option("--hidden", f.hidden, "Hidden width (default 32)");
  cmd.add_option("--embed-dim", f.embed_dim, "Similarity embedding width (default: hidden)");
  cmd.add_option("--encoder-depth", f.encoder_depth, "Linear layers in the similarity MLP (default 1)");
  cmd.add_option("--lr", f.lr, "Adam learning rate (default 0.001; 0.01 suits CiteSeer-scale data)");
  cmd.add_option("--dropout", f.dropout, "Dropout after layer 1 (default 0.5)");
  cmd.add_option("--c-scale", f.c_scale, "Scale on learned Gaussian widths (default 0.1)");
  cmd.add_option("--gausim-b", f.gausim_b, "Fixed Gaussian peak (default 0.5)");
  cmd.add_option("--gausim-c", f.gausim_c, "Fixed Gaussian width (default 0.02e)");
  cmd.add_option("--heat-t", f.heat_t, "Heat kernel bandwidth (default 1)");
  cmd.add_option("--epochs", f.epochs, "Maximum epochs (default 500)");
  cmd.add_option("--patience", f.patience, "Early-stopping patience (default 100)");
  cmd.add_option("--seed", f.seed, "Seed for init, noise and splits (default 0)");
  cmd.add_flag("--self-loop", f.self_loop, "Mix the identity into the adjacency (full/knn)");
  cmd.add_flag("--mask-self", f.mask_self, "Exclude the self column (full/knn)");
  cmd.add_flag("--shared-transition", f.shared_transition, "One projector pair for both layers");
  cmd.add_flag("--anchors-random", f.anchors_random, "Frozen random anchor selection");
  cmd.add_flag("--straight-through", f.straight_through, "Hard forward, soft backward samples");
  cmd.add_flag("--raw-features", f.raw_features, "Skip row-L2 normalization of inputs");
  cmd.add_flag("--raw-embeddings", f.raw_embeddings, "Skip row-L2 normalization of embeddings");
}

}  // namespace

int main(int argc, char** argv) {
  gslearn::apply_thread_env();

  CLI::App app{"gslearn: differentiable graph structure learning"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Thread cap (overrides GSL_NUM_THREADS)");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Train a model and write metrics + checkpoint");
  add_source(*train_cmd, train.data);
  add_model_flags(*train_cmd, train.model);
  train_cmd->add_option("--k-sweep", train.k_sweep, "Comma-separated K values, one run each")
      ->delimiter(',');
  train_cmd->add_option("--out", train.out, "Output directory");
  train_cmd->add_flag("-v,--verbose", train.verbose, "Per-epoch progress on stderr");

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on every split");
  add_source(*eval_cmd, eval.data);
  eval_cmd->add_option("--checkpoint", eval.checkpoint, "Checkpoint file")->required();
  eval_cmd->add_option("--remove-transition", eval.remove_transition,
                       "Drop this many transition nodes before evaluating");
  eval_cmd->add_option("--out", eval.out, "Metrics file (default stdout)");

  auto* analyze = app.add_subcommand("analyze", "Analysis exports");
  analyze->require_subcommand(1);

  Theorem1Args t1;
  auto* t1_cmd = analyze->add_subcommand("theorem1", "Randomized check of the aggregation bound");
  t1_cmd->add_option("--trials", t1.trials, "Total trials (default 10000)");
  t1_cmd->add_option("--seed", t1.seed, "Seed");
  t1_cmd->add_option("--out", t1.out, "CSV report (default stdout)");

  CurveArgs curves;
  auto* curves_cmd = analyze->add_subcommand("curves", "Kernel score vs similarity (CSV + SVG)");
  curves_cmd->add_option("--kernel", curves.kernel, "lin|diff|gau|neuralgau|heat");
  curves_cmd->add_option("--b", curves.b, "Gaussian peak");
  curves_cmd->add_option("--c", curves.c, "Gaussian width");
  curves_cmd->add_option("--t", curves.t, "Heat kernel bandwidth");
  curves_cmd->add_option("--points", curves.points, "Grid points over [-1, 1]");
  curves_cmd->add_option("--out", curves.out, "Output directory");

  ParamsArgs params;
  auto* params_cmd = analyze->add_subcommand("params", "Five-number summaries of learned b and c");
  add_source(*params_cmd, params.data);
  params_cmd->add_option("--checkpoint", params.checkpoint, "Checkpoint file")->required();
  params_cmd->add_option("--out", params.out, "CSV file (default stdout)");

  StructureArgs structure;
  auto* structure_cmd = analyze->add_subcommand("structure", "Edge lists of both learned layers");
  add_source(*structure_cmd, structure.data);
  structure_cmd->add_option("--checkpoint", structure.checkpoint, "Checkpoint file")->required();
  structure_cmd->add_option("--threshold", structure.threshold, "Keep weights above this");
  structure_cmd->add_option("--out", structure.out, "Output directory");

  ComplexityArgs complexity;
  auto* complexity_cmd = analyze->add_subcommand("complexity", "Similarity buffer size and time");
  complexity_cmd->add_option("--mode", complexity.mode, "full|transition");
  complexity_cmd->add_option("--kernel", complexity.kernel, "Kernel to time");
  complexity_cmd->add_option("--n-grid", complexity.ns, "Ascending node counts")->delimiter(',');
  complexity_cmd->add_option("--s", complexity.s, "Transition node count");
  complexity_cmd->add_option("--repeats", complexity.repeats, "Timing repeats (min is kept)");
  complexity_cmd->add_option("--out", complexity.out, "CSV file (default stdout)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset in manifest format");
  synth_cmd->add_option("--spec", synth.spec, "blobs:classes=..,per_class=..,dim=..,...");
  synth_cmd->add_flag("--splits", synth.with_splits, "Also write a splits file");
  synth_cmd->add_option("--split-seed", synth.split_seed, "Seed for the splits file");
  synth_cmd->add_option("--out", synth.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  if (threads > 0) gslearn::set_num_threads(threads);

  try {
    if (train_cmd->parsed()) return run_train(train);
    if (eval_cmd->parsed()) return run_eval(eval);
    if (t1_cmd->parsed()) return run_theorem1(t1);
    if (curves_cmd->parsed()) return run_curves(curves);
    if (params_cmd->parsed()) return run_params(params);
    if (structure_cmd->parsed()) return run_structure(structure);
    if (complexity_cmd->parsed()) return run_complexity(complexity);
    if (synth_cmd->parsed()) return run_synth(synth);
  } catch (const gslearn::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const gslearn::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const gslearn::ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 2;
}
