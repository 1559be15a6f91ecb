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

#include "gslearn/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "gslearn/error.hpp"
#include "gslearn/rng.hpp"

namespace gslearn {
namespace fs = std::filesystem;
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string(what) + ": cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (trim(text).empty()) throw IoError(std::string(what) + ": " + path.string() + " is empty");
  return text;
}

// Lines of a text file with the trailing empty line (if any) dropped.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && !s.empty();
}

std::size_t manifest_count(const json& m, const char* key) {
  if (!m.contains(key) || !m[key].is_number_unsigned()) {
    throw ValidationError(0, std::string("manifest: '") + key + "' must be a non-negative integer");
  }
  return m[key].get<std::size_t>();
}

Matrix parse_features(std::string_view text, std::size_t n, std::size_t d, const fs::path& path) {
  const auto lines = split_lines(text);
  if (lines.size() != n) {
    throw ValidationError(std::min(lines.size(), n) + 1,
                          path.string() + ": expected " + std::to_string(n) + " rows, found " +
                              std::to_string(lines.size()));
  }
  Matrix x(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    std::string_view line = lines[i];
    std::size_t col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view cell =
          line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      double v = 0.0;
      if (col >= d || !parse_number(cell, v) || !std::isfinite(v)) {
        throw ValidationError(i + 1, path.string() + ": line " + std::to_string(i + 1) +
                                         (col >= d ? ": more than " + std::to_string(d) + " columns"
                                                   : ": bad value '" + std::string(trim(cell)) + "'"));
      }
      x(i, col++) = v;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (col != d) {
      throw ValidationError(i + 1, path.string() + ": line " + std::to_string(i + 1) + ": " +
                                       std::to_string(col) + " columns, expected " +
                                       std::to_string(d));
    }
  }
  return x;
}

std::vector<int> parse_labels(std::string_view text, std::size_t n, std::size_t classes,
                              const fs::path& path) {
  const auto lines = split_lines(text);
  if (lines.size() != n) {
    throw ValidationError(std::min(lines.size(), n) + 1,
                          path.string() + ": expected " + std::to_string(n) + " labels, found " +
                              std::to_string(lines.size()));
  }
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    long v = 0;
    if (!parse_number(lines[i], v) || v < 0 || static_cast<std::size_t>(v) >= classes) {
      throw ValidationError(i + 1, path.string() + ": line " + std::to_string(i + 1) +
                                       ": label '" + std::string(trim(lines[i])) +
                                       "' outside [0, " + std::to_string(classes) + ")");
    }
    y[i] = static_cast<int>(v);
  }
  return y;
}

SplitMasks parse_splits(std::string_view text, std::size_t n, const fs::path& path) {
  SplitMasks s;
  std::vector<bool> seen(n, false);
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::string_view line = trim(lines[li]);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    const std::string_view id_s = comma == std::string_view::npos ? line : line.substr(0, comma);
    const std::string_view which =
        comma == std::string_view::npos ? std::string_view{} : trim(line.substr(comma + 1));
    std::size_t id = 0;
    if (!parse_number(id_s, id)) {
      if (li == 0) continue;  // header row
      throw ValidationError(li + 1, path.string() + ": bad node id on line " + std::to_string(li + 1));
    }
    if (id >= n || seen[id]) {
      throw ValidationError(li + 1, path.string() + ": line " + std::to_string(li + 1) +
                                        (id >= n ? ": node id out of range" : ": node listed twice"));
    }
    seen[id] = true;
    if (which == "train") s.train.push_back(id);
    else if (which == "val") s.val.push_back(id);
    else if (which == "test") s.test.push_back(id);
    else {
      throw ValidationError(li + 1, path.string() + ": line " + std::to_string(li + 1) +
                                        ": split must be train|val|test");
    }
  }
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<bool> SplitMasks::mask(const std::vector<std::size_t>& indices, std::size_t n) {
  std::vector<bool> m(n, false);
  for (std::size_t i : indices) m.at(i) = true;
  return m;
}

void check_splits(const SplitMasks& s, std::size_t n) {
  std::vector<int> hits(n, 0);
  for (const auto* part : {&s.train, &s.val, &s.test}) {
    for (std::size_t i : *part) {
      if (i >= n) throw ValidationError(0, "splits: node " + std::to_string(i) + " out of range");
      ++hits[i];
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (hits[i] != 1) {
      throw ValidationError(0, "splits: node " + std::to_string(i) + " appears in " +
                                   std::to_string(hits[i]) + " splits");
    }
  }
}

Dataset load_dataset(const fs::path& manifest_path) {
  const std::string text = read_file(manifest_path, "manifest");
  json m;
  try {
    m = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(0, manifest_path.string() + ": " + e.what());
  }
  for (const char* key : {"features_csv", "labels_csv"}) {
    if (!m.contains(key) || !m[key].is_string()) {
      throw ValidationError(0, std::string("manifest: '") + key + "' must be a path string");
    }
  }
  const std::size_t n = manifest_count(m, "n");
  const std::size_t d = manifest_count(m, "d");
  const std::size_t classes = manifest_count(m, "num_classes");
  if (n == 0 || d == 0 || classes < 2) {
    throw ValidationError(0, "manifest: need n >= 1, d >= 1 and num_classes >= 2");
  }
  const fs::path base = manifest_path.parent_path();
  auto resolve = [&base](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  Dataset ds;
  ds.name = m.value("name", manifest_path.stem().string());
  ds.num_classes = classes;
  const fs::path fpath = resolve(m["features_csv"].get<std::string>());
  ds.features = parse_features(read_file(fpath, "features"), n, d, fpath);
  const fs::path lpath = resolve(m["labels_csv"].get<std::string>());
  ds.labels = parse_labels(read_file(lpath, "labels"), n, classes, lpath);
  if (m.contains("splits_csv") && !m["splits_csv"].is_null()) {
    const fs::path spath = resolve(m["splits_csv"].get<std::string>());
    SplitMasks s = parse_splits(read_file(spath, "splits"), n, spath);
    if (s.train.empty() || s.val.empty()) {
      throw ValidationError(0, spath.string() + ": train and val splits must be non-empty");
    }
    ds.splits = std::move(s);
  }
  return ds;
}

fs::path write_dataset(const Dataset& ds, const fs::path& dir) {
  if (ds.labels.size() != ds.num_nodes()) {
    throw DimensionError("write_dataset: " + std::to_string(ds.labels.size()) + " labels for " +
                         std::to_string(ds.num_nodes()) + " nodes");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("write_dataset: cannot create " + dir.string() + ": " + ec.message());

  auto open = [](const fs::path& p) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("write_dataset: cannot write " + p.string());
    return out;
  };
  {
    std::ofstream out = open(dir / "features.csv");
    for (std::size_t i = 0; i < ds.num_nodes(); ++i) {
      const auto row = ds.features.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) out << (j ? "," : "") << format_double(row[j]);
      out << '\n';
    }
  }
  {
    std::ofstream out = open(dir / "labels.csv");
    for (int y : ds.labels) out << y << '\n';
  }
  json m = {{"name", ds.name},
            {"n", ds.num_nodes()},
            {"d", ds.num_features()},
            {"num_classes", ds.num_classes},
            {"features_csv", "features.csv"},
            {"labels_csv", "labels.csv"}};
  if (ds.splits) {
    std::vector<const char*> tag(ds.num_nodes(), nullptr);
    for (std::size_t i : ds.splits->train) tag.at(i) = "train";
    for (std::size_t i : ds.splits->val) tag.at(i) = "val";
    for (std::size_t i : ds.splits->test) tag.at(i) = "test";
    std::ofstream out = open(dir / "splits.csv");
    out << "node_id,split\n";
    for (std::size_t i = 0; i < tag.size(); ++i)
      if (tag[i]) out << i << ',' << tag[i] << '\n';
    m["splits_csv"] = "splits.csv";
  }
  const fs::path manifest = dir / "manifest.json";
  open(manifest) << m.dump(2) << '\n';
  return manifest;
}

SplitMasks make_splits(std::size_t n, std::uint64_t seed, std::array<double, 3> ratios) {
  const double total = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(total - 1.0) > 1e-9 || ratios[0] < 0 || ratios[1] < 0 || ratios[2] < 0) {
    throw ConfigError("make_splits: ratios must be non-negative and sum to 1");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng = Rng(seed).substream(Stream::split);
  rng.shuffle(std::span<std::size_t>(order));

  const auto n_train = static_cast<std::size_t>(std::floor(ratios[0] * static_cast<double>(n)));
  const auto n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));
  SplitMasks s;
  s.train.assign(order.begin(), order.begin() + n_train);
  s.val.assign(order.begin() + n_train, order.begin() + n_train + n_val);
  s.test.assign(order.begin() + n_train + n_val, order.end());
  // Canonical ascending order, the same order a splits file loads in.
  for (auto* v : {&s.train, &s.val, &s.test}) std::sort(v->begin(), v->end());
  return s;
}

BlobSpec parse_blob_spec(std::string_view spec) {
  BlobSpec b;
  const std::string_view head = spec.substr(0, spec.find(':'));
  if (head != "blobs") {
    throw ConfigError("synth spec '" + std::string(spec) + "': only 'blobs' is available");
  }
  if (head.size() == spec.size()) return b;
  std::string_view rest = spec.substr(head.size() + 1);
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("synth spec: expected key=value, got '" + std::string(item) + "'");
    }
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view val = item.substr(eq + 1);
    bool ok = false;
    if (key == "classes") ok = parse_number(val, b.classes);
    else if (key == "per_class") ok = parse_number(val, b.per_class);
    else if (key == "dim") ok = parse_number(val, b.dim);
    else if (key == "separation") ok = parse_number(val, b.separation);
    else if (key == "noise") ok = parse_number(val, b.noise);
    else if (key == "seed") ok = parse_number(val, b.seed);
    else throw ConfigError("synth spec: unknown key '" + std::string(key) + "'");
    if (!ok) throw ConfigError("synth spec: bad value for '" + std::string(key) + "'");
  }
  return b;
}

Dataset synth_blobs(const BlobSpec& spec) {
  if (spec.separation <= 0.0) throw ConfigError("synth_blobs: separation must be > 0");
  if (spec.noise < 0.0) throw ConfigError("synth_blobs: noise must be >= 0");
  if (spec.classes < 2 || spec.per_class < 1 || spec.dim < 1) {
    throw ConfigError("synth_blobs: need classes >= 2, per_class >= 1, dim >= 1");
  }
  Rng rng = Rng(spec.seed).substream(Stream::data);
  Matrix centers(spec.classes, spec.dim);
  for (std::size_t c = 0; c < spec.classes; ++c) {
    double sq = 0.0;
    do {
      sq = 0.0;
      for (double& v : centers.row(c)) {
        v = rng.normal();
        sq += v * v;
      }
    } while (sq < 1e-12);
    const double s = spec.separation / std::sqrt(sq);
    for (double& v : centers.row(c)) v *= s;
  }

  Dataset ds;
  ds.name = "blobs";
  ds.num_classes = spec.classes;
  ds.features = Matrix(spec.classes * spec.per_class, spec.dim);
  ds.labels.resize(ds.features.rows());
  for (std::size_t c = 0; c < spec.classes; ++c) {
    for (std::size_t p = 0; p < spec.per_class; ++p) {
      const std::size_t i = c * spec.per_class + p;
      ds.labels[i] = static_cast<int>(c);
      for (std::size_t k = 0; k < spec.dim; ++k)
        ds.features(i, k) = centers(c, k) + spec.noise * rng.normal();
    }
  }
  return ds;
}

double one_nn_accuracy(const Dataset& ds, const std::vector<std::size_t>& reference,
                       const std::vector<std::size_t>& eval) {
  if (eval.empty()) throw ConfigError("one_nn_accuracy: empty evaluation set");
  std::size_t correct = 0;
  for (std::size_t i : eval) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = i;
    for (std::size_t j : reference) {
      if (j == i) continue;
      double dist = 0.0;
      for (std::size_t k = 0; k < ds.num_features(); ++k) {
        const double diff = ds.features(i, k) - ds.features(j, k);
        dist += diff * diff;
      }
      if (dist < best || (dist == best && j < best_j)) {
        best = dist;
        best_j = j;
      }
    }
    if (best_j != i && ds.labels[best_j] == ds.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(eval.size());
}

}  // namespace gslearn
