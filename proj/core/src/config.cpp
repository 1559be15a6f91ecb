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

#include "gslearn/config.hpp"

#include <set>
#include <string>

#include <json.hpp>

#include "gslearn/error.hpp"

namespace gslearn {
namespace {

using nlohmann::json;

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void usage(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

}  // namespace

Mode parse_mode(std::string_view name) {
  if (name == "full") return Mode::full;
  if (name == "transition") return Mode::transition;
  if (name == "knn") return Mode::knn;
  throw ConfigError("unknown mode '" + std::string(name) + "' (expected full|transition|knn)");
}

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::full: return "full";
    case Mode::transition: return "transition";
    case Mode::knn: return "knn";
  }
  return "?";
}

void validate(const ModelConfig& c) {
  require(c.k >= 1, "k must be >= 1");
  require(c.tau > 0.0, "tau must be > 0");
  require(c.transition_nodes >= 1, "transition node count s must be >= 1");
  require(c.hidden >= 1, "hidden dimension must be >= 1");
  require(c.encoder_depth >= 1, "encoder depth must be >= 1");
  require(c.dropout >= 0.0 && c.dropout < 1.0, "dropout must lie in [0, 1)");
  require(c.lr > 0.0, "learning rate must be > 0");
  require(c.c_scale > 0.0, "c-scale must be > 0");
  require(c.gausim_c > 0.0, "gausim c must be > 0");
  require(c.heat_t > 0.0, "heat kernel t must be > 0");
  require(c.epochs >= 1, "epochs must be >= 1");

  const bool transition = c.mode == Mode::transition;
  usage(!(transition && c.kernel == Kernel::heat),
        "--kernel heat is a baseline kernel and cannot train in --mode transition");
  usage(c.mode != Mode::knn || c.kernel == Kernel::lin || c.kernel == Kernel::heat,
        "--mode knn builds its graph from lin (cosine) or heat scores only");
  usage(!(transition && c.self_loop), "--self-loop applies to full and knn modes only");
  usage(!(transition && c.mask_self), "--mask-self applies to full and knn modes only");
  usage(transition || !c.shared_transition, "--shared-transition requires --mode transition");
  usage(transition || !c.anchors_random, "--anchors-random requires --mode transition");
  usage(c.mode != Mode::knn || !c.straight_through, "--straight-through has no effect in knn mode");
  usage(c.kernel != Kernel::diff || c.normalize_embeddings,
        "--kernel diff requires normalized embeddings");
}

std::string to_json(const ModelConfig& c) {
  json j = {
      {"kernel", std::string(kernel_name(c.kernel))},
      {"mode", std::string(mode_name(c.mode))},
      {"k", c.k},
      {"tau", c.tau},
      {"transition_nodes", c.transition_nodes},
      {"hidden", c.hidden},
      {"embed_dim", c.embed_dim},
      {"encoder_depth", c.encoder_depth},
      {"dropout", c.dropout},
      {"lr", c.lr},
      {"c_scale", c.c_scale},
      {"gausim_b", c.gausim_b},
      {"gausim_c", c.gausim_c},
      {"heat_t", c.heat_t},
      {"seed", c.seed},
      {"epochs", c.epochs},
      {"patience", c.patience},
      {"normalize_features", c.normalize_features},
      {"normalize_embeddings", c.normalize_embeddings},
      {"self_loop", c.self_loop},
      {"mask_self", c.mask_self},
      {"shared_transition", c.shared_transition},
      {"anchors_random", c.anchors_random},
      {"straight_through", c.straight_through},
  };
  return j.dump();
}

ModelConfig config_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config JSON: expected an object");

  ModelConfig c;
  static const std::set<std::string> known = {
      "kernel", "mode", "k", "tau", "transition_nodes", "hidden", "embed_dim", "encoder_depth",
      "dropout", "lr", "c_scale", "gausim_b", "gausim_c", "heat_t", "seed", "epochs",
      "patience", "normalize_features", "normalize_embeddings", "self_loop", "mask_self",
      "shared_transition", "anchors_random", "straight_through"};
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("config JSON: unknown key '" + key + "'");
  }

  try {
    if (j.contains("kernel")) c.kernel = parse_kernel(j["kernel"].get<std::string>());
    if (j.contains("mode")) c.mode = parse_mode(j["mode"].get<std::string>());
    auto read = [&j](const char* key, auto& field) {
      if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    read("k", c.k);
    read("tau", c.tau);
    read("transition_nodes", c.transition_nodes);
    read("hidden", c.hidden);
    read("embed_dim", c.embed_dim);
    read("encoder_depth", c.encoder_depth);
    read("dropout", c.dropout);
    read("lr", c.lr);
    read("c_scale", c.c_scale);
    read("gausim_b", c.gausim_b);
    read("gausim_c", c.gausim_c);
    read("heat_t", c.heat_t);
    read("seed", c.seed);
    read("epochs", c.epochs);
    read("patience", c.patience);
    read("normalize_features", c.normalize_features);
    read("normalize_embeddings", c.normalize_embeddings);
    read("self_loop", c.self_loop);
    read("mask_self", c.mask_self);
    read("shared_transition", c.shared_transition);
    read("anchors_random", c.anchors_random);
    read("straight_through", c.straight_through);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  return c;
}

}  // namespace gslearn
