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

#include <filesystem>

#include "gslearn/data.hpp"
#include "gslearn/model.hpp"

namespace gslearn {

// Text layout, one record per line:
//   gslearn-checkpoint 1
//   config <json>
//   shape <num_nodes> <input_dim> <num_classes>
//   param <name> <rows> <cols>
//   <rows*cols values, row-major, space separated, shortest round-trip decimal>
//   ... one param/values pair per stored matrix, in named_matrices() order
//   end

void save_checkpoint(const GslModel& model, const std::filesystem::path& path);

/// Rebuilds the model from its config and overwrites every matrix. Any
/// missing, extra, misnamed or misshaped matrix raises CheckpointError.
GslModel load_checkpoint(const std::filesystem::path& path);

/// Throws CheckpointError unless the dataset has the n, d and class count the
/// model was built for.
void check_compatible(const GslModel& model, const Dataset& dataset);

}  // namespace gslearn
