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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "commgad/experiment.hpp"
#include "commgad/model.hpp"
#include "commgad/synthetic.hpp"
#include "commgad/train.hpp"

namespace commgad {

// Configuration for `detect` and `experiment`, read from a JSON document:
//
//   {
//     "edges": "edges.txt", "features": "features.csv", "labels": "labels.txt",
//     "community_algorithm": "louvain",
//     "model": {"hidden_dim": 16, "gcn_layers": 2, "lambda_x": 1.0,
//               "lambda_n": 0.5, "sigma_floor": 1e-6},
//     "train": {"epochs": 100, "learning_rate": 0.005, "optimizer": "adam",
//               "weight_decay": 0.0, "beta1": 0.9, "beta2": 0.999, "epsilon": 1e-8},
//     "seed": 0, "runs": 10, "jobs": 1, "output": "out",
//     "checkpoint": "model.ckpt",
//     "grid": {"lambda_x": [...], "lambda_n": [...], "hidden_dim": [...]}
//   }
//
// Unknown keys are rejected. Relative paths resolve against the config
// file's directory.
struct RunConfig {
  std::filesystem::path edges;
  std::filesystem::path features;
  std::optional<std::filesystem::path> labels;
  ModelConfig model;
  TrainConfig train;
  std::size_t runs = 10;
  std::size_t jobs = 1;
  std::filesystem::path output = "out";
  std::optional<Grid> grid;

  // Throws ConfigError if an input file is missing or a value is invalid.
  void validate() const;
};

RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);

// Configuration for `inject`: either an input graph ("edges"/"features") or
// a "synthetic" block, plus the "injection" block.
//
//   {
//     "synthetic": {"num_nodes": 500, "avg_degree": 8, "feature_dim": 16,
//                   "num_communities": 4, "intra_fraction": 0.9,
//                   "center_scale": 1.0, "feature_noise": 0.5},
//     "injection": {"n_structural": 13, "clique_size": 6, "n_contextual": 12,
//                   "swap_candidates": 50},
//     "seed": 0, "output": "data", "binary_features": false
//   }
struct InjectRunConfig {
  std::optional<std::filesystem::path> edges;
  std::optional<std::filesystem::path> features;
  std::optional<SyntheticConfig> synthetic;
  InjectionConfig injection;
  std::uint64_t seed = 0;
  std::filesystem::path output = "data";
  bool binary_features = false;

  void validate() const;
};

InjectRunConfig parse_inject_config(const std::string& json_text, const std::filesystem::path& base_dir = {});
InjectRunConfig load_inject_config(const std::filesystem::path& path);

}  // namespace commgad
