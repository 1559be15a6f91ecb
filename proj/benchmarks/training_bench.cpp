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

#include <benchmark/benchmark.h>

#include <vector>

#include "gslearn/matrix.hpp"
#include "gslearn/optim.hpp"
#include "gslearn/trainer.hpp"

namespace {

using namespace gslearn;

void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(1);
  Matrix a(n, n), b(n, 32);
  for (double& v : a.values()) v = rng.normal();
  for (double& v : b.values()) v = rng.normal();
  for (auto _ : state) benchmark::DoNotOptimize(matmul(a, b).data());
  state.counters["flops"] = benchmark::Counter(2.0 * static_cast<double>(n * n * 32),
                                               benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_Matmul)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond);

// One training step (forward with noise, backward, Adam) on the blob problem.
void BM_TrainStep(benchmark::State& state, Mode mode, Kernel kernel) {
  const Dataset ds = synth_blobs(BlobSpec{});
  const SplitMasks sp = make_splits(ds.num_nodes(), 0);
  ModelConfig c;
  c.mode = mode;
  c.kernel = kernel;
  c.k = static_cast<std::size_t>(state.range(0));
  GslModel model(c, ds.num_nodes(), ds.num_features(), ds.num_classes);
  std::vector<Var> params = model.parameters();
  AdamState adam = make_adam_state(params, {.lr = c.lr});
  std::uint64_t epoch = 0;
  for (auto _ : state) {
    zero_grads(params);
    const ForwardResult f = model.forward(ds.features, Rng(0).split(++epoch), true);
    backward(cross_entropy(f.logits, ds.labels, sp.train));
    adam_step(params, adam);
  }
}
BENCHMARK_CAPTURE(BM_TrainStep, neuralgau_transition, Mode::transition, Kernel::neuralgau)
    ->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_TrainStep, neuralgau_full, Mode::full, Kernel::neuralgau)
    ->Arg(5)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  const Dataset ds = synth_blobs(BlobSpec{});
  const SplitMasks sp = make_splits(ds.num_nodes(), 0);
  const GslModel model(ModelConfig{}, ds.num_nodes(), ds.num_features(), ds.num_classes);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(model, ds, sp).test_accuracy);
}
BENCHMARK(BM_Evaluate)->Unit(benchmark::kMillisecond);

}  // namespace
