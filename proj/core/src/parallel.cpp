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

#include "gslearn/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef GSLEARN_HAVE_OPENMP
#include <omp.h>
#endif

namespace gslearn {

void set_num_threads(int n) {
  if (n < 1) return;
#ifdef GSLEARN_HAVE_OPENMP
  omp_set_num_threads(n);
#endif
}

int num_threads() {
#ifdef GSLEARN_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void apply_thread_env() {
  const char* raw = std::getenv("GSL_NUM_THREADS");
  if (raw == nullptr) return;
  try {
    set_num_threads(std::stoi(raw));
  } catch (const std::exception&) {
    // Unparseable values leave the default in place.
  }
}

}  // namespace gslearn
