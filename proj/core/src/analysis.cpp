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

#include "gslearn/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "gslearn/data.hpp"
#include "gslearn/error.hpp"
#include "gslearn/init.hpp"

namespace gslearn {
namespace {

constexpr double kBoundSlack = 1e-9;

std::vector<double> random_unit(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  double sq = 0.0;
  do {
    sq = 0.0;
    for (double& x : v) {
      x = rng.normal();
      sq += x * x;
    }
  } while (sq < 1e-12);
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
  return v;
}

// One unit vector within distance eps of h, or false after max_attempts.
bool sample_neighbor(std::span<const double> h, double eps, std::size_t max_attempts, Rng& rng,
                     std::span<double> out) {
  if (eps == 0.0) {
    std::copy(h.begin(), h.end(), out.begin());
    return true;
  }
  const double half_width = 2.0 * eps / std::sqrt(static_cast<double>(h.size()));
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    double sq = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      out[k] = h[k] + rng.uniform(-half_width, half_width);
      sq += out[k] * out[k];
    }
    if (sq < 1e-24) continue;
    const double inv = 1.0 / std::sqrt(sq);
    double dist_sq = 0.0;
    for (std::size_t k = 0; k < h.size(); ++k) {
      out[k] *= inv;
      dist_sq += (out[k] - h[k]) * (out[k] - h[k]);
    }
    if (std::sqrt(dist_sq) <= eps) return true;
  }
  return false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

Theorem1Report theorem1_suite(const Theorem1Options& opt) {
  for (double eps : opt.epsilons) {
    if (!(eps >= 0.0 && eps <= 2.0)) throw ConfigError("theorem1_suite: epsilon must lie in [0, 2]");
  }
  const std::size_t configs = opt.dims.size() * opt.ks.size() * opt.epsilons.size();
  if (configs == 0) throw ConfigError("theorem1_suite: empty configuration grid");
  const std::size_t per_config = (opt.trials + configs - 1) / configs;
  const Rng root = Rng(opt.seed).substream(Stream::analysis);

  Theorem1Report report;
  std::size_t index = 0;
  for (std::size_t dim : opt.dims) {
    for (std::size_t k : opt.ks) {
      for (double eps : opt.epsilons) {
        Theorem1Row row{dim, k, eps, 0, 0, 0, 0.0, std::numeric_limits<double>::infinity()};
        const Rng cfg_rng = root.split(index++);
        Matrix neighbors(k, dim);
        for (std::size_t t = 0; t < per_config; ++t) {
          Rng rng = cfg_rng.split(t);
          const std::vector<double> h = random_unit(dim, rng);
          bool feasible = true;
          for (std::size_t j = 0; j < k && feasible; ++j)
            feasible = sample_neighbor(h, eps, opt.max_attempts, rng, neighbors.row(j));
          if (!feasible) {
            ++row.infeasible;
            continue;
          }
          const AggregateResult agg = theorem1_aggregate(h, neighbors);
          ++row.trials;
          row.max_distance = std::max(row.max_distance, agg.distance);
          row.min_slack = std::min(row.min_slack, eps - agg.distance);
          if (agg.distance > eps + kBoundSlack) ++row.violations;
        }
        if (row.trials == 0) row.min_slack = 0.0;
        report.total_trials += row.trials;
        report.total_violations += row.violations;
        report.total_infeasible += row.infeasible;
        report.rows.push_back(row);
      }
    }
  }
  return report;
}

std::string theorem1_csv(const Theorem1Report& r) {
  std::ostringstream out;
  out << "dim,k,epsilon,trials,violations,infeasible,max_distance,min_slack\n";
  for (const auto& row : r.rows) {
    out << row.dim << ',' << row.k << ',' << format_double(row.epsilon) << ',' << row.trials << ','
        << row.violations << ',' << row.infeasible << ',' << format_double(row.max_distance) << ','
        << format_double(row.min_slack) << '\n';
  }
  return out.str();
}

std::vector<CurvePoint> curve_emit(Kernel kernel, const CurveParams& p,
                                   const std::vector<double>& grid) {
  if ((kernel == Kernel::gau || kernel == Kernel::neuralgau) && p.c <= 0.0) {
    throw ConfigError("curve_emit: Gaussian width c must be > 0");
  }
  if (kernel == Kernel::heat && p.t <= 0.0) throw ConfigError("curve_emit: heat t must be > 0");
  std::vector<CurvePoint> out;
  out.reserve(grid.size());
  for (double s : grid) {
    if (s < -1.0 || s > 1.0) {
      throw ConfigError("curve_emit: similarity grid must lie within [-1, 1]");
    }
    double phi = 0.0;
    switch (kernel) {
      case Kernel::lin: phi = std::exp(s); break;
      case Kernel::diff: phi = std::exp(1.0 - s); break;
      case Kernel::gau:
      case Kernel::neuralgau: phi = gaussian_value(s, p.b, p.c); break;
      case Kernel::heat: phi = heat_value_normalized(s, p.t); break;
    }
    out.push_back({s, phi});
  }
  return out;
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points < 2) throw ConfigError("linear_grid: need at least two points");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = hi;
  return g;
}

std::string curve_csv(const std::vector<CurvePoint>& curve) {
  std::ostringstream out;
  out << "similarity,score\n";
  for (const auto& p : curve) out << format_double(p.similarity) << ',' << format_double(p.score) << '\n';
  return out.str();
}

std::string curve_svg(const std::vector<CurvePoint>& curve, const std::string& title) {
  constexpr double w = 480, h = 320, pad = 40;
  double x0 = 0, x1 = 1, y1 = 1;
  if (!curve.empty()) {
    x0 = curve.front().similarity;
    x1 = curve.back().similarity;
    y1 = 0.0;
    for (const auto& p : curve) y1 = std::max(y1, p.score);
    if (y1 <= 0.0) y1 = 1.0;
    if (x1 == x0) x1 = x0 + 1.0;
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << ' ' << h << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << w / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << title
      << "</text>\n"
      << "<line x1=\"" << pad << "\" y1=\"" << h - pad << "\" x2=\"" << w - pad << "\" y2=\""
      << h - pad << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << h - pad
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << pad << "\" y=\"" << h - pad / 3 << "\" font-size=\"11\">"
      << format_double(x0) << "</text>\n"
      << "<text x=\"" << w - pad << "\" y=\"" << h - pad / 3
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(x1) << "</text>\n"
      << "<text x=\"" << pad - 4 << "\" y=\"" << pad
      << "\" text-anchor=\"end\" font-size=\"11\">" << format_double(y1) << "</text>\n"
      << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (const auto& p : curve) {
    const double px = pad + (p.similarity - x0) / (x1 - x0) * (w - 2 * pad);
    const double py = h - pad - p.score / y1 * (h - 2 * pad);
    out << px << ',' << py << ' ';
  }
  out << "\"/>\n</svg>\n";
  return out.str();
}

FiveNumber five_number_summary(std::vector<double> v) {
  if (v.empty()) throw ConfigError("five_number_summary: no values");
  std::sort(v.begin(), v.end());
  auto q = [&v](double p) {
    const double pos = p * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[hi] - v[lo]);
  };
  return {v.front(), q(0.25), q(0.5), q(0.75), v.back()};
}

ParamSummary param_distribution(const GslModel& model, const Matrix& features) {
  if (model.config().kernel != Kernel::neuralgau) {
    throw ConfigError("param_distribution: needs the neuralgau kernel, model uses " +
                      std::string(kernel_name(model.config().kernel)));
  }
  const ForwardResult out = model.forward(features, Rng(model.config().seed), false);
  ParamSummary s;
  for (std::size_t l = 0; l < 2; ++l) {
    const auto b = out.layers[l].b.value().values();
    std::vector<double> c(out.layers[l].c.value().values().begin(),
                          out.layers[l].c.value().values().end());
    for (double& x : c) x *= 10.0;
    s.b[l] = five_number_summary({b.begin(), b.end()});
    s.c[l] = five_number_summary(std::move(c));
  }
  return s;
}

std::string param_csv(const ParamSummary& s) {
  std::ostringstream out;
  out << "layer,param,min,q1,median,q3,max\n";
  for (std::size_t l = 0; l < 2; ++l) {
    for (const auto& [name, f] : {std::pair{"b", s.b[l]}, std::pair{"c_x10", s.c[l]}}) {
      out << l + 1 << ',' << name << ',' << format_double(f.min) << ',' << format_double(f.q1)
          << ',' << format_double(f.median) << ',' << format_double(f.q3) << ','
          << format_double(f.max) << '\n';
    }
  }
  return out.str();
}

std::size_t export_structure(const Matrix& a, double threshold, const std::filesystem::path& path) {
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw ConfigError("export_structure: threshold must lie in [0, 1)");
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("export_structure: cannot write " + path.string());
  std::size_t edges = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double w = a(i, j);
      if (w > threshold) {
        out << i << '\t' << j << '\t' << format_double(w) << '\n';
        ++edges;
      }
    }
  }
  if (!out) throw IoError("export_structure: write failed for " + path.string());
  return edges;
}

std::vector<ComplexityRow> complexity_probe(const ComplexityOptions& opt) {
  if (opt.mode == Mode::knn) throw ConfigError("complexity_probe: mode must be full or transition");
  if (opt.repeats == 0) throw ConfigError("complexity_probe: repeats must be >= 1");
  for (std::size_t i = 1; i < opt.ns.size(); ++i) {
    if (opt.ns[i] <= opt.ns[i - 1]) throw ConfigError("complexity_probe: n grid must ascend");
  }
  const Rng root = Rng(opt.seed).substream(Stream::analysis);
  Rng param_rng = root.split(0);
  const NeuralGaussian neural = NeuralGaussian::glorot(opt.dim, 0.1, param_rng);
  KernelSpec spec;
  spec.kernel = opt.kernel;

  std::vector<ComplexityRow> rows;
  for (std::size_t n : opt.ns) {
    Rng rng = root.split(n);
    auto unit_rows = [&rng, &opt](std::size_t count) {
      Matrix m(count, opt.dim);
      for (std::size_t i = 0; i < count; ++i) {
        const auto v = random_unit(opt.dim, rng);
        std::copy(v.begin(), v.end(), m.row(i).begin());
      }
      return EmbeddingMatrix{constant(std::move(m)), true};
    };
    const EmbeddingMatrix z = unit_rows(n);
    const EmbeddingMatrix cand = opt.mode == Mode::transition ? unit_rows(opt.s) : z;

    ComplexityRow row;
    row.n = n;
    row.candidates = cand.z.rows();
    row.seconds = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < opt.repeats; ++r) {
      reset_similarity_buffer_stats();
      const auto t0 = std::chrono::steady_clock::now();
      const KernelOutput k = evaluate_kernel(spec, z, cand, &neural);
      row.seconds = std::min(row.seconds, seconds_since(t0));
      row.buffer_entries = similarity_buffer_stats().peak_entries;
    }
    row.growth_ratio = rows.empty() ? 0.0 : row.seconds / rows.back().seconds;
    rows.push_back(row);
  }
  return rows;
}

std::string complexity_csv(const std::vector<ComplexityRow>& rows) {
  std::ostringstream out;
  out << "n,candidates,buffer_entries,seconds,growth_ratio\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.candidates << ',' << r.buffer_entries << ',' << format_double(r.seconds)
        << ',' << format_double(r.growth_ratio) << '\n';
  }
  return out.str();
}

}  // namespace gslearn
