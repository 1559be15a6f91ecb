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
#include <string>
#include <vector>

#include "gslearn/config.hpp"
#include "gslearn/model.hpp"

namespace gslearn {

// ---- mean-aggregation bound ------------------------------------------------

struct Theorem1Options {
  std::vector<std::size_t> dims{4, 16, 64};
  std::vector<std::size_t> ks{1, 5, 20};
  std::vector<double> epsilons{0.1, 0.3, 1.0};
  std::size_t trials = 10000;  // total, spread evenly (rounded up) over configurations
  std::size_t max_attempts = 1000;  // rejection attempts per neighbor
  std::uint64_t seed = 0;
};

struct Theorem1Row {
  std::size_t dim = 0;
  std::size_t k = 0;
  double epsilon = 0.0;
  std::size_t trials = 0;
  std::size_t violations = 0;
  std::size_t infeasible = 0;  // trials abandoned because rejection never accepted
  double max_distance = 0.0;
  double min_slack = 0.0;  // min over trials of epsilon - distance
};

struct Theorem1Report {
  std::vector<Theorem1Row> rows;
  std::size_t total_trials = 0;
  std::size_t total_violations = 0;
  std::size_t total_infeasible = 0;
};

/// Samples unit h and k unit neighbors within distance eps of h (uniform cube
/// perturbation, renormalize, reject if farther than eps), then checks
/// ||mean(neighbors) - h|| <= eps + 1e-9. Throws ConfigError for eps outside [0, 2].
Theorem1Report theorem1_suite(const Theorem1Options& options);
std::string theorem1_csv(const Theorem1Report& report);

// ---- kernel curves ---------------------------------------------------------

struct CurveParams {
  double b = kDefaultGaussianPeak;
  double c = kDefaultGaussianWidth;
  double t = 1.0;
};

struct CurvePoint {
  double similarity;
  double score;
};

/// Unnormalized score phi(s) of a kernel as a function of the inner product s
/// of unit vectors: lin exp(s), diff exp(1 - s), gau/neuralgau
/// exp(-(s - b)^2 / c), heat exp(-2 (1 - s) / t).
std::vector<CurvePoint> curve_emit(Kernel kernel, const CurveParams& params,
                                   const std::vector<double>& grid);
/// Evenly spaced grid over [lo, hi] with `points` entries.
std::vector<double> linear_grid(double lo, double hi, std::size_t points);
std::string curve_csv(const std::vector<CurvePoint>& curve);
/// Minimal polyline plot.
std::string curve_svg(const std::vector<CurvePoint>& curve, const std::string& title);

// ---- Gaussian parameter distributions -------------------------------------

struct FiveNumber {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

/// Linear-interpolation quantiles (type 7). Throws ConfigError on empty input.
FiveNumber five_number_summary(std::vector<double> values);

struct ParamSummary {
  std::array<FiveNumber, 2> b;
  std::array<FiveNumber, 2> c;  // reported as c * 10
};

/// Inference pass, then summaries of every node's b_i and c_i per layer.
/// Throws ConfigError unless the model uses the neuralgau kernel.
ParamSummary param_distribution(const GslModel& model, const Matrix& features);
std::string param_csv(const ParamSummary& summary);

// ---- structure export ------------------------------------------------------

/// Writes "i<TAB>j<TAB>weight" for every entry strictly above the threshold.
/// Returns the number of edges. Throws ConfigError for threshold outside [0, 1).
std::size_t export_structure(const Matrix& adjacency, double threshold,
                             const std::filesystem::path& path);

// ---- complexity ------------------------------------------------------------

struct ComplexityOptions {
  std::vector<std::size_t> ns{1000, 2000, 4000};
  std::size_t s = 500;
  Mode mode = Mode::transition;
  Kernel kernel = Kernel::neuralgau;
  std::size_t dim = 32;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
};

struct ComplexityRow {
  std::size_t n = 0;
  std::size_t candidates = 0;
  std::size_t buffer_entries = 0;
  double seconds = 0.0;       // min over repeats
  double growth_ratio = 0.0;  // seconds / previous row's seconds; 0 for the first row
};

/// Times one similarity evaluation (kernel scores plus row softmax) on random
/// unit embeddings and reads the peak score-buffer size from the kernel hooks.
std::vector<ComplexityRow> complexity_probe(const ComplexityOptions& options);
std::string complexity_csv(const std::vector<ComplexityRow>& rows);

}  // namespace gslearn
