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

// Small shared problem instances.

#include <cstddef>
#include <cstdint>

#include "gslearn/config.hpp"
#include "gslearn/data.hpp"

namespace gslearn::testing {

/// 12 nodes, 5 features, 3 classes.
inline Dataset tiny_dataset() {
  BlobSpec spec;
  spec.classes = 3;
  spec.per_class = 4;
  spec.dim = 5;
  return synth_blobs(spec);
}

/// hidden 4, s 4, K 2, tau 0.25, no dropout.
inline ModelConfig tiny_config(Kernel kernel, Mode mode, std::uint64_t seed = 0) {
  ModelConfig c;
  c.kernel = kernel;
  c.mode = mode;
  c.hidden = 4;
  c.transition_nodes = 4;
  c.k = 2;
  c.tau = 0.25;
  c.dropout = 0.0;
  c.seed = seed;
  return c;
}

/// The blob problem used by the learning checks: 3 x 200 nodes, dim 16.
inline Dataset blob_dataset() { return synth_blobs(BlobSpec{}); }

}  // namespace gslearn::testing
