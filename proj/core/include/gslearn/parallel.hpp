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

namespace gslearn {

/// Caps the threads used by row-parallel kernels. Values < 1 are ignored.
/// Results never depend on the thread count: each output row is reduced by a
/// single thread in a fixed order.
void set_num_threads(int n);
int num_threads();

/// Applies GSL_NUM_THREADS from the environment, if set and valid.
void apply_thread_env();

}  // namespace gslearn
