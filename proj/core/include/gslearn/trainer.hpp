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
#include <functional>
#include <string>
#include <vector>

#include "gslearn/data.hpp"
#include "gslearn/model.hpp"

namespace gslearn {

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double train_accuracy = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
};

struct Evaluation {
  double train_accuracy = 0.0;
  double val_accuracy = 0.0;
  double test_accuracy = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double test_loss = 0.0;
};

struct TrainResult {
  std::vector<EpochRecord> history;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
  bool stopped_early = false;
  Evaluation best;  // evaluation of the restored best-val parameters
};

struct TrainOptions {
  /// Called after every epoch, e.g. for progress output.
  std::function<void(const EpochRecord&)> on_epoch;
};

/// Deterministic inference pass over every split.
Evaluation evaluate(const GslModel& model, const Dataset& dataset, const SplitMasks& splits);

/// Adam on the train-split cross entropy for up to config.epochs epochs.
/// Epoch e draws its noise from Rng(seed).split(e). The best epoch is the one
/// with the highest validation accuracy (lower validation loss breaks ties);
/// training stops after `patience` epochs without a new best. On return the
/// model holds the best epoch's parameters. knn mode builds its graph first.
TrainResult train(GslModel& model, const Dataset& dataset, const SplitMasks& splits,
                  const TrainOptions& options = {});

/// Metrics document for one run: schema_version, dataset, config, best-val
/// split accuracies and the per-epoch history. Contains no timestamps, so
/// identical runs give identical text.
std::string metrics_json(const GslModel& model, const Dataset& dataset, const TrainResult& result);

/// Metrics document for an evaluation-only run.
std::string eval_json(const GslModel& model, const Dataset& dataset, const Evaluation& e);

struct SweepRecord {
  std::size_t k = 0;
  TrainResult result;
};

/// One training run per K value from the same config and seed.
std::vector<SweepRecord> k_sweep(const ModelConfig& base, const Dataset& dataset,
                                 const SplitMasks& splits, const std::vector<std::size_t>& ks,
                                 const TrainOptions& options = {});
std::string sweep_json(const ModelConfig& base, const Dataset& dataset,
                       const std::vector<SweepRecord>& records);

}  // namespace gslearn
