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
#include <vector>

#include "commgad/graph.hpp"

namespace commgad {

struct SyntheticConfig {
  std::size_t num_nodes = 500;
  double avg_degree = 8.0;
  std::size_t feature_dim = 16;
  std::size_t num_communities = 4;
  // Expected share of a node's edges that stay inside its block.
  double intra_fraction = 0.9;
  double center_scale = 1.0;   // std of community feature centers
  double feature_noise = 0.5;  // std of per-node noise around the center
  std::uint64_t seed = 0;
};

struct SyntheticGraph {
  AttributedGraph graph;               // no labels
  std::vector<std::uint32_t> planted;  // block of each node
  double p_in = 0.0;
  double p_out = 0.0;
};

// Planted-partition graph: node i sits in block ⌊i·K/n⌋, pairs inside a block
// link with p_in and across blocks with p_out, chosen so the expected degree
// is avg_degree. Features are the block center plus Gaussian noise.
// Throws ConfigError if the requested degree needs a probability above 1.
SyntheticGraph generate_synthetic(const SyntheticConfig& cfg);

// Same, with explicit link probabilities.
SyntheticGraph generate_planted(std::size_t num_nodes, std::size_t feature_dim, std::size_t num_communities,
                                double p_in, double p_out, std::uint64_t seed, double center_scale = 1.0,
                                double feature_noise = 0.5);

struct InjectionConfig {
  std::size_t n_structural = 0;
  std::size_t clique_size = 6;
  std::size_t n_contextual = 0;
  std::size_t swap_candidates = 50;
  std::uint64_t seed = 0;

  void validate(std::size_t num_nodes) const;
};

struct InjectionResult {
  AttributedGraph graph;  // labelled
  std::vector<std::vector<NodeId>> cliques;
  std::vector<NodeId> contextual;
};

// Structural: the chosen nodes are split into ⌊n_structural / clique_size⌋
// cliques (the remainder joins the last clique) and fully connected.
// Contextual: each chosen node takes the feature row of the farthest (in
// Euclidean distance) of `swap_candidates` random other nodes, measured on
// the original features. The two selections never overlap.
InjectionResult inject_anomalies(const AttributedGraph& g, const InjectionConfig& ic);

}  // namespace commgad
