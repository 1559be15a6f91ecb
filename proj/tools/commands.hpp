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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gslearn/config.hpp"
#include "gslearn/data.hpp"

namespace gslearn::cli {

/// Where the nodes come from: a manifest or a synthetic spec.
struct DataSource {
  std::string dataset;
  std::string synth;
};

/// Model flags as given on the command line; unset fields keep the value
/// from --config (or the library default).
struct ModelFlags {
  std::string config_file;
  std::optional<std::string> kernel, mode;
  std::optional<std::size_t> k, s, hidden, embed_dim, encoder_depth, epochs, patience;
  std::optional<double> tau, lr, dropout, c_scale, gausim_b, gausim_c, heat_t;
  std::optional<std::uint64_t> seed;
  bool self_loop = false, mask_self = false, shared_transition = false, anchors_random = false;
  bool straight_through = false, raw_features = false, raw_embeddings = false;

  ModelConfig resolve() const;
};

struct TrainArgs {
  DataSource data;
  ModelFlags model;
  std::vector<std::size_t> k_sweep;
  std::string out = "gslearn-out";
  bool verbose = false;
};

struct EvalArgs {
  DataSource data;
  std::string checkpoint;
  std::size_t remove_transition = 0;
  std::string out;  // empty: stdout
};

struct Theorem1Args {
  std::size_t trials = 10000;
  std::uint64_t seed = 0;
  std::string out;
};

struct CurveArgs {
  std::string kernel = "gau";
  double b = kDefaultGaussianPeak;
  double c = kDefaultGaussianWidth;
  double t = 1.0;
  std::size_t points = 201;
  std::string out = "curves";
};

struct ParamsArgs {
  DataSource data;
  std::string checkpoint;
  std::string out;
};

struct StructureArgs {
  DataSource data;
  std::string checkpoint;
  double threshold = 0.01;
  std::string out = "structure";
};

struct ComplexityArgs {
  std::string mode = "transition";
  std::string kernel = "neuralgau";
  std::vector<std::size_t> ns{1000, 2000, 4000};
  std::size_t s = 500;
  std::size_t repeats = 5;
  std::string out;
};

struct SynthArgs {
  std::string spec = "blobs";
  std::uint64_t split_seed = 0;
  bool with_splits = false;
  std::string out = "blobs";
};

int run_train(const TrainArgs& args);
int run_eval(const EvalArgs& args);
int run_theorem1(const Theorem1Args& args);
int run_curves(const CurveArgs& args);
int run_params(const ParamsArgs& args);
int run_structure(const StructureArgs& args);
int run_complexity(const ComplexityArgs& args);
int run_synth(const SynthArgs& args);

/// Loads the manifest or builds the synthetic dataset. Exactly one source must be set.
Dataset load_source(const DataSource& source);
/// Dataset splits when present, otherwise make_splits(n, seed).
SplitMasks splits_for(const Dataset& dataset, std::uint64_t seed);

}  // namespace gslearn::cli
