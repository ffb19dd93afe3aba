// Copyright 2026 The commgad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commgad/run_config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "commgad/error.hpp"
#include "json.hpp"

namespace commgad {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("bad value for '") + key + "'");
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& obj, const char* key) {
  std::string text;
  read(obj, key, text);
  std::filesystem::path path(text);
  return path.is_relative() && !base.empty() ? base / path : path;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

void require_file(const std::filesystem::path& p, std::string_view what) {
  if (!std::filesystem::is_regular_file(p)) {
    throw ConfigError(std::string(what) + " file not found: " + p.string());
  }
}

}  // namespace

void RunConfig::validate() const {
  model.validate();
  train.validate();
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (edges.empty()) throw ConfigError("missing 'edges' path");
  if (features.empty()) throw ConfigError("missing 'features' path");
  require_file(edges, "edge");
  require_file(features, "feature");
  if (labels) require_file(*labels, "label");
  if (grid && (grid->lambda_x.empty() || grid->lambda_n.empty() || grid->hidden_dim.empty())) {
    throw ConfigError("grid axes must be non-empty");
  }
}

RunConfig parse_run_config(const std::string& text, const std::filesystem::path& base) {
  const json j = parse_json(text);
  reject_unknown(j, "config", {"edges", "features", "labels", "community_algorithm", "model", "train", "seed", "runs",
                               "jobs", "output", "checkpoint", "grid"});
  RunConfig rc;
  if (j.contains("edges")) rc.edges = resolve(base, j, "edges");
  if (j.contains("features")) rc.features = resolve(base, j, "features");
  if (j.contains("labels")) rc.labels = resolve(base, j, "labels");
  if (j.contains("output")) rc.output = resolve(base, j, "output");
  if (j.contains("checkpoint")) rc.train.checkpoint_path = resolve(base, j, "checkpoint");
  if (j.contains("community_algorithm")) {
    std::string name;
    read(j, "community_algorithm", name);
    rc.train.community = parse_community_algorithm(name);
  }
  read(j, "seed", rc.train.seed);
  read(j, "runs", rc.runs);
  read(j, "jobs", rc.jobs);
  if (j.contains("model")) {
    const json& m = j.at("model");
    reject_unknown(m, "model", {"hidden_dim", "gcn_layers", "lambda_x", "lambda_n", "sigma_floor"});
    read(m, "hidden_dim", rc.model.hidden_dim);
    read(m, "gcn_layers", rc.model.gcn_layers);
    read(m, "lambda_x", rc.model.lambda_x);
    read(m, "lambda_n", rc.model.lambda_n);
    read(m, "sigma_floor", rc.model.sigma_floor);
  }
  if (j.contains("train")) {
    const json& t = j.at("train");
    reject_unknown(t, "train", {"epochs", "learning_rate", "optimizer", "weight_decay", "beta1", "beta2", "epsilon"});
    read(t, "epochs", rc.train.epochs);
    read(t, "learning_rate", rc.train.optimizer.learning_rate);
    read(t, "weight_decay", rc.train.optimizer.weight_decay);
    read(t, "beta1", rc.train.optimizer.beta1);
    read(t, "beta2", rc.train.optimizer.beta2);
    read(t, "epsilon", rc.train.optimizer.epsilon);
    if (t.contains("optimizer")) {
      std::string name;
      read(t, "optimizer", name);
      rc.train.optimizer.kind = parse_optimizer(name);
    }
  }
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    reject_unknown(g, "grid", {"lambda_x", "lambda_n", "hidden_dim"});
    Grid grid{{rc.model.lambda_x}, {rc.model.lambda_n}, {rc.model.hidden_dim}};
    read(g, "lambda_x", grid.lambda_x);
    read(g, "lambda_n", grid.lambda_n);
    read(g, "hidden_dim", grid.hidden_dim);
    rc.grid = std::move(grid);
  }
  rc.model.seed = rc.train.seed;
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(slurp(path), path.parent_path());
}

void InjectRunConfig::validate() const {
  if (synthetic.has_value() == (edges.has_value() || features.has_value())) {
    throw ConfigError("inject: give either 'synthetic' or 'edges' + 'features'");
  }
  if (!synthetic) {
    if (!edges || !features) throw ConfigError("inject: both 'edges' and 'features' are required");
    require_file(*edges, "edge");
    require_file(*features, "feature");
  }
}

InjectRunConfig parse_inject_config(const std::string& text, const std::filesystem::path& base) {
  const json j = parse_json(text);
  reject_unknown(j, "config", {"edges", "features", "synthetic", "injection", "seed", "output", "binary_features"});
  InjectRunConfig ic;
  if (j.contains("edges")) ic.edges = resolve(base, j, "edges");
  if (j.contains("features")) ic.features = resolve(base, j, "features");
  if (j.contains("output")) ic.output = resolve(base, j, "output");
  read(j, "seed", ic.seed);
  read(j, "binary_features", ic.binary_features);
  if (j.contains("synthetic")) {
    const json& s = j.at("synthetic");
    reject_unknown(s, "synthetic", {"num_nodes", "avg_degree", "feature_dim", "num_communities", "intra_fraction",
                                    "center_scale", "feature_noise"});
    SyntheticConfig sc;
    read(s, "num_nodes", sc.num_nodes);
    read(s, "avg_degree", sc.avg_degree);
    read(s, "feature_dim", sc.feature_dim);
    read(s, "num_communities", sc.num_communities);
    read(s, "intra_fraction", sc.intra_fraction);
    read(s, "center_scale", sc.center_scale);
    read(s, "feature_noise", sc.feature_noise);
    ic.synthetic = sc;
  }
  if (j.contains("injection")) {
    const json& s = j.at("injection");
    reject_unknown(s, "injection", {"n_structural", "clique_size", "n_contextual", "swap_candidates"});
    read(s, "n_structural", ic.injection.n_structural);
    read(s, "clique_size", ic.injection.clique_size);
    read(s, "n_contextual", ic.injection.n_contextual);
    read(s, "swap_candidates", ic.injection.swap_candidates);
  }
  return ic;
}

InjectRunConfig load_inject_config(const std::filesystem::path& path) {
  return parse_inject_config(slurp(path), path.parent_path());
}

}  // namespace commgad
