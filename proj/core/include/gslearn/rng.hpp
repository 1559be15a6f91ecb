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
#include <random>
#include <span>
#include <vector>

namespace gslearn {

/// Named substreams. Drawing from one never perturbs another, so e.g. turning
/// dropout off leaves every Gumbel draw unchanged.
enum class Stream : std::uint64_t {
  init = 1,
  gumbel = 2,
  dropout = 3,
  split = 4,
  data = 5,
  analysis = 6,
};

/// Seeded generator with splittable substreams.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Floating-point conversion and the normal/Gumbel transforms are
/// implemented here rather than through std distributions (which are
/// implementation-defined), so identical seeds produce identical draws on
/// every conforming platform.
///
/// split(tag) derives a child seed as splitmix64(seed ^ splitmix64(tag + 1))
/// and never advances the parent.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0);

  std::uint64_t seed() const noexcept { return seed_; }

  Rng split(std::uint64_t tag) const;
  Rng substream(Stream s) const { return split(static_cast<std::uint64_t>(s)); }

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (one value per call, no cached spare).
  double normal();
  /// Standard Gumbel: -log(-log(u)), u clamped to [1e-12, 1 - 1e-12].
  double gumbel();
  /// Fills `out` with standard Gumbel draws using the same clamp as gumbel().
  /// The log transform is vectorized, so values may differ from gumbel() in
  /// the last bits; the uniform sequence consumed is identical.
  void fill_gumbel(std::span<double> out);
  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace gslearn
