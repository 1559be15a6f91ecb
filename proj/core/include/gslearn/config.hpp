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
#include <string>
#include <string_view>

#include "gslearn/similarity.hpp"

namespace gslearn {

enum class Mode { full, transition, knn };

Mode parse_mode(std::string_view name);
std::string_view mode_name(Mode mode);

/// Everything needed to rebuild and retrain a model. Serialized as JSON in
/// checkpoints, metrics files and `--config` files.
struct ModelConfig {
  Kernel kernel = Kernel::neuralgau;
  Mode mode = Mode::transition;
  std::size_t k = 5;          // relaxed draws per node (kNN size in knn mode)
  double tau = 0.25;          // Gumbel-Softmax temperature
  std::size_t transition_nodes = 500;
  std::size_t hidden = 32;
  std::size_t embed_dim = 0;  // similarity embedding width; 0 = same as hidden
  std::size_t encoder_depth = 1;
  double dropout = 0.5;
  double lr = 0.001;
  double c_scale = 0.1;
  double gausim_b = kDefaultGaussianPeak;
  double gausim_c = kDefaultGaussianWidth;
  double heat_t = 1.0;
  std::uint64_t seed = 0;
  std::size_t epochs = 500;
  std::size_t patience = 100;
  bool normalize_features = true;
  bool normalize_embeddings = true;
  bool self_loop = false;
  bool mask_self = false;
  bool shared_transition = false;
  bool anchors_random = false;
  bool straight_through = false;

  std::size_t embedding_width() const { return embed_dim == 0 ? hidden : embed_dim; }
  KernelSpec kernel_spec() const {
    return {kernel, {gausim_b, gausim_c}, heat_t, mask_self};
  }
};

/// Throws ConfigError for out-of-range values and UsageError for flag
/// combinations that cannot run (e.g. heat kernel in transition mode).
void validate(const ModelConfig& config);

std::string to_json(const ModelConfig& config);
/// Missing keys keep their defaults; unknown keys are rejected.
ModelConfig config_from_json(std::string_view json);

}  // namespace gslearn
