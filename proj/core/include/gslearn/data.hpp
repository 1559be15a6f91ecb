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

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gslearn/matrix.hpp"

namespace gslearn {

/// Node index lists for the three splits. Disjoint; together they cover 0..n-1.
struct SplitMasks {
  std::vector<std::size_t> train;
  std::vector<std::size_t> val;
  std::vector<std::size_t> test;

  /// Boolean membership view of one split list.
  static std::vector<bool> mask(const std::vector<std::size_t>& indices, std::size_t n);
};

struct Dataset {
  std::string name;
  Matrix features;  // n x d, raw (normalization happens at model input)
  std::vector<int> labels;
  std::size_t num_classes = 0;
  std::optional<SplitMasks> splits;

  std::size_t num_nodes() const { return features.rows(); }
  std::size_t num_features() const { return features.cols(); }
};

/// Reads manifest.json {name, n, d, num_classes, features_csv, labels_csv,
/// optional splits_csv}. Relative paths resolve against the manifest's folder.
/// Malformed content raises ValidationError with its 1-based line; missing or
/// empty files raise IoError. Nothing is returned on failure.
Dataset load_dataset(const std::filesystem::path& manifest);

/// Writes manifest.json, features.csv, labels.csv (and splits.csv when the
/// dataset carries splits) into `dir`. Floats use shortest round-trip decimal
/// text, so load_dataset() reproduces every value bit for bit.
std::filesystem::path write_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Shuffles 0..n-1 with Rng(seed).substream(split) and cuts the permutation
/// into train = floor(r0 * n), val = floor(r1 * n), test = the remainder.
SplitMasks make_splits(std::size_t n, std::uint64_t seed,
                       std::array<double, 3> ratios = {0.5, 0.25, 0.25});

/// Checks disjointness and coverage; throws ValidationError otherwise.
void check_splits(const SplitMasks& splits, std::size_t n);

struct BlobSpec {
  std::size_t classes = 3;
  std::size_t per_class = 200;
  std::size_t dim = 16;
  double separation = 3.0;
  double noise = 0.5;
  std::uint64_t seed = 0;
};

/// Parses "blobs" or "blobs:classes=3,per_class=200,dim=16,separation=3,noise=0.5,seed=0".
/// Omitted keys keep their defaults. Throws ConfigError on anything else.
BlobSpec parse_blob_spec(std::string_view spec);

/// Isotropic Gaussian clusters around random unit-norm centers scaled by
/// `separation`. Nodes are grouped by class; label = cluster id.
Dataset synth_blobs(const BlobSpec& spec);

/// Leave-one-out 1-NN accuracy of `eval` nodes against `reference` nodes on raw
/// features (ties go to the lowest index). Used as a learnability oracle.
double one_nn_accuracy(const Dataset& dataset, const std::vector<std::size_t>& reference,
                       const std::vector<std::size_t>& eval);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace gslearn
