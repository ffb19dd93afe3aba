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
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "commgad/community.hpp"
#include "commgad/graph.hpp"
#include "commgad/model.hpp"
#include "commgad/optimizer.hpp"

namespace commgad {

struct TrainConfig {
  std::size_t epochs = 100;
  OptimizerConfig optimizer;  // adam, lr 5e-3, β1 0.9, β2 0.999, ε 1e-8
  std::uint64_t seed = 0;
  CommunityAlgorithm community = CommunityAlgorithm::kLouvain;
  std::optional<std::filesystem::path> checkpoint_path;

  void validate() const;
};

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double total_loss = 0.0;
  double feature_loss = 0.0;  // Σ_u feature_loss_u
  double h_loss = 0.0;        // Σ_u h_loss_u
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
};

struct TrainResult {
  ModelParams params;
  TrainHistory history;
  // Forward pass with the trained parameters after the last update; source
  // of the attention matrix and per-node losses used for scoring.
  ForwardOutput final_output;
  CommunityAssignment communities;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

// Detects communities once, then runs `epochs` full-batch steps. The run is
// seeded by tcfg.seed alone: it overrides cfg.seed for parameter init and
// also drives the community detector. Throws NumericalError (with the epoch
// and per-tensor parameter norms) if the loss becomes non-finite.
TrainResult train(const AttributedGraph& g, ModelConfig cfg, const TrainConfig& tcfg,
                  const EpochCallback& on_epoch = {});

// Same, with a caller-supplied assignment (skips detection).
TrainResult train_with_communities(const AttributedGraph& g, const CommunityAssignment& communities,
                                   ModelConfig cfg, const TrainConfig& tcfg, const EpochCallback& on_epoch = {});

// One JSON object per line: {"epoch","total_loss","feat_loss","h_loss","seconds"}.
void write_epoch_jsonl(std::ostream& out, const EpochRecord& r);

}  // namespace commgad
