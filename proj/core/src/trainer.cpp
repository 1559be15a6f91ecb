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

#include "gslearn/trainer.hpp"

#include <json.hpp>

#include "gslearn/error.hpp"
#include "gslearn/optim.hpp"

namespace gslearn {
namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;

double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  std::size_t correct = 0;
  for (std::size_t i : rows) {
    const auto r = logits.row(i);
    std::size_t best = 0;
    for (std::size_t c = 1; c < r.size(); ++c)
      if (r[c] > r[best]) best = c;
    if (static_cast<int>(best) == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(rows.size());
}

double loss_on(const Var& logits, const std::vector<int>& labels,
               const std::vector<std::size_t>& rows) {
  if (rows.empty()) return 0.0;
  return cross_entropy(constant(logits.value()), labels, rows).value()(0, 0);
}

json config_json(const ModelConfig& c) { return json::parse(to_json(c)); }

json dataset_json(const Dataset& ds) {
  return {{"name", ds.name},
          {"n", ds.num_nodes()},
          {"d", ds.num_features()},
          {"num_classes", ds.num_classes}};
}

json evaluation_json(const Evaluation& e) {
  return {{"train_accuracy", e.train_accuracy}, {"val_accuracy", e.val_accuracy},
          {"test_accuracy", e.test_accuracy},   {"train_loss", e.train_loss},
          {"val_loss", e.val_loss},             {"test_loss", e.test_loss}};
}

json result_json(const TrainResult& r) {
  json j = evaluation_json(r.best);
  j["best_epoch"] = r.best_epoch;
  j["epochs_run"] = r.epochs_run;
  j["stopped_early"] = r.stopped_early;
  json h = {{"epoch", json::array()},          {"train_loss", json::array()},
            {"train_accuracy", json::array()}, {"val_loss", json::array()},
            {"val_accuracy", json::array()}};
  for (const auto& e : r.history) {
    h["epoch"].push_back(e.epoch);
    h["train_loss"].push_back(e.train_loss);
    h["train_accuracy"].push_back(e.train_accuracy);
    h["val_loss"].push_back(e.val_loss);
    h["val_accuracy"].push_back(e.val_accuracy);
  }
  j["history"] = std::move(h);
  return j;
}

}  // namespace

Evaluation evaluate(const GslModel& model, const Dataset& ds, const SplitMasks& splits) {
  const ForwardResult out = model.forward(ds.features, Rng(model.config().seed), false);
  const Matrix& logits = out.logits.value();
  Evaluation e;
  e.train_accuracy = accuracy(logits, ds.labels, splits.train);
  e.val_accuracy = accuracy(logits, ds.labels, splits.val);
  e.test_accuracy = accuracy(logits, ds.labels, splits.test);
  e.train_loss = loss_on(out.logits, ds.labels, splits.train);
  e.val_loss = loss_on(out.logits, ds.labels, splits.val);
  e.test_loss = loss_on(out.logits, ds.labels, splits.test);
  return e;
}

TrainResult train(GslModel& model, const Dataset& ds, const SplitMasks& splits,
                  const TrainOptions& options) {
  check_splits(splits, ds.num_nodes());
  if (splits.train.empty() || splits.val.empty()) {
    throw ConfigError("train: train and validation splits must be non-empty");
  }
  const ModelConfig& cfg = model.config();
  if (cfg.mode == Mode::knn && !model.has_knn_graph()) model.build_knn_graph(ds.features);

  std::vector<Var> params = model.parameters();
  AdamState adam = make_adam_state(params, {.lr = cfg.lr});
  const Rng run(cfg.seed);

  TrainResult result;
  std::vector<Matrix> best_values;
  double best_acc = -1.0;
  double best_loss = 0.0;
  std::size_t since_best = 0;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    zero_grads(params);
    const ForwardResult fwd = model.forward(ds.features, run.split(epoch), true);
    const Var loss = cross_entropy(fwd.logits, ds.labels, splits.train);
    backward(loss);
    adam_step(params, adam);

    const Evaluation e = evaluate(model, ds, splits);
    EpochRecord rec{epoch, loss.value()(0, 0), e.train_accuracy, e.val_loss, e.val_accuracy};
    result.history.push_back(rec);
    result.epochs_run = epoch;
    if (options.on_epoch) options.on_epoch(rec);

    if (e.val_accuracy > best_acc || (e.val_accuracy == best_acc && e.val_loss < best_loss)) {
      best_acc = e.val_accuracy;
      best_loss = e.val_loss;
      result.best_epoch = epoch;
      best_values.clear();
      for (const auto& p : params) best_values.push_back(p.value());
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      result.stopped_early = epoch < cfg.epochs;
      break;
    }
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i].mutable_value() = best_values[i];
  zero_grads(params);
  result.best = evaluate(model, ds, splits);
  return result;
}

std::string metrics_json(const GslModel& model, const Dataset& ds, const TrainResult& r) {
  json j = {{"schema_version", kSchemaVersion},
            {"command", "train"},
            {"dataset", dataset_json(ds)},
            {"seed", model.config().seed},
            {"config", config_json(model.config())}};
  j.update(result_json(r));
  return j.dump(2) + "\n";
}

std::string eval_json(const GslModel& model, const Dataset& ds, const Evaluation& e) {
  json j = {{"schema_version", kSchemaVersion},
            {"command", "eval"},
            {"dataset", dataset_json(ds)},
            {"seed", model.config().seed},
            {"config", config_json(model.config())}};
  j.update(evaluation_json(e));
  return j.dump(2) + "\n";
}

std::vector<SweepRecord> k_sweep(const ModelConfig& base, const Dataset& ds,
                                 const SplitMasks& splits, const std::vector<std::size_t>& ks,
                                 const TrainOptions& options) {
  if (ks.empty()) throw ConfigError("k_sweep: no K values given");
  std::vector<SweepRecord> out;
  for (std::size_t k : ks) {
    ModelConfig cfg = base;
    cfg.k = k;
    GslModel model(cfg, ds.num_nodes(), ds.num_features(), ds.num_classes);
    out.push_back({k, train(model, ds, splits, options)});
  }
  return out;
}

std::string sweep_json(const ModelConfig& base, const Dataset& ds,
                       const std::vector<SweepRecord>& records) {
  json results = json::array();
  for (const auto& r : records) {
    json j = {{"k", r.k}};
    j.update(result_json(r.result));
    results.push_back(std::move(j));
  }
  json j = {{"schema_version", kSchemaVersion},
            {"command", "train"},
            {"sweep", "k"},
            {"dataset", dataset_json(ds)},
            {"seed", base.seed},
            {"config", config_json(base)},
            {"results", std::move(results)}};
  return j.dump(2) + "\n";
}

}  // namespace gslearn
