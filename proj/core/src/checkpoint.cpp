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

#include "gslearn/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "gslearn/error.hpp"

namespace gslearn {
namespace fs = std::filesystem;
namespace {

constexpr const char* kMagic = "gslearn-checkpoint";
constexpr int kVersion = 1;

std::string expect_line(std::istream& in, const fs::path& path, const char* what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw CheckpointError(path.string() + ": truncated before " + what);
  }
  return line;
}

}  // namespace

void save_checkpoint(const GslModel& model, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("save_checkpoint: cannot write " + path.string());
  out << kMagic << ' ' << kVersion << '\n';
  out << "config " << to_json(model.config()) << '\n';
  out << "shape " << model.num_nodes() << ' ' << model.input_dim() << ' ' << model.num_classes()
      << '\n';
  for (const auto& nm : model.named_matrices()) {
    const Matrix& m = nm.var.value();
    out << "param " << nm.name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    const auto v = m.values();
    for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << format_double(v[i]);
    out << '\n';
  }
  out << "end\n";
  if (!out) throw IoError("save_checkpoint: write failed for " + path.string());
}

GslModel load_checkpoint(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint " + path.string());

  std::istringstream head(expect_line(in, path, "header"));
  std::string magic;
  int version = 0;
  head >> magic >> version;
  if (magic != kMagic) throw CheckpointError(path.string() + ": not a gslearn checkpoint");
  if (version != kVersion) {
    throw CheckpointError(path.string() + ": unsupported checkpoint version " +
                          std::to_string(version));
  }

  const std::string cfg_line = expect_line(in, path, "config");
  if (cfg_line.rfind("config ", 0) != 0) throw CheckpointError(path.string() + ": missing config");
  ModelConfig config;
  try {
    config = config_from_json(std::string_view(cfg_line).substr(7));
  } catch (const ConfigError& e) {
    throw CheckpointError(path.string() + ": " + e.what());
  }

  std::istringstream shape(expect_line(in, path, "shape"));
  std::string tag;
  std::size_t n = 0, d = 0, classes = 0;
  shape >> tag >> n >> d >> classes;
  if (tag != "shape" || !shape) throw CheckpointError(path.string() + ": bad shape record");

  // Transition nodes may have been removed before saving; the stored config
  // already reflects the reduced s, so construction matches the stored shapes.
  GslModel model(config, n, d, classes);
  for (auto& nm : model.named_matrices()) {
    std::istringstream rec(expect_line(in, path, nm.name.c_str()));
    std::string name;
    std::size_t rows = 0, cols = 0;
    rec >> tag >> name >> rows >> cols;
    if (tag != "param" || name != nm.name) {
      throw CheckpointError(path.string() + ": expected matrix '" + nm.name + "', found '" +
                            name + "'");
    }
    Matrix& target = nm.var.mutable_value();
    if (rows != target.rows() || cols != target.cols()) {
      throw CheckpointError(path.string() + ": matrix '" + name + "' is " +
                            shape_string(rows, cols) + ", model expects " +
                            target.shape_string());
    }
    const std::string values = expect_line(in, path, nm.name.c_str());
    const char* p = values.data();
    const char* end = values.data() + values.size();
    for (double& v : target.values()) {
      while (p < end && *p == ' ') ++p;
      const auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) {
        throw CheckpointError(path.string() + ": matrix '" + name + "' has too few values");
      }
      p = res.ptr;
    }
    while (p < end && (*p == ' ' || *p == '\r')) ++p;
    if (p != end) throw CheckpointError(path.string() + ": matrix '" + name + "' has extra values");
  }
  if (expect_line(in, path, "end") != "end") {
    throw CheckpointError(path.string() + ": unexpected records after the last matrix");
  }
  std::string rest;
  while (std::getline(in, rest)) {
    if (rest.find_first_not_of(" \t\r") != std::string::npos) {
      throw CheckpointError(path.string() + ": content after the end record");
    }
  }
  return model;
}

void check_compatible(const GslModel& model, const Dataset& ds) {
  if (ds.num_nodes() != model.num_nodes() || ds.num_features() != model.input_dim() ||
      ds.num_classes != model.num_classes()) {
    throw CheckpointError("checkpoint expects n=" + std::to_string(model.num_nodes()) +
                          " d=" + std::to_string(model.input_dim()) +
                          " classes=" + std::to_string(model.num_classes()) + ", dataset '" +
                          ds.name + "' has n=" + std::to_string(ds.num_nodes()) +
                          " d=" + std::to_string(ds.num_features()) +
                          " classes=" + std::to_string(ds.num_classes));
  }
}

}  // namespace gslearn
