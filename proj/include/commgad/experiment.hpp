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
#include "commgad/model.hpp"
#include "commgad/scoring.hpp"
#include "commgad/train.hpp"

namespace commgad {

// Trains once and scores the final forward pass.
AnomalyReport detect(const AttributedGraph& g, const ModelConfig& cfg, const TrainConfig& tcfg,
                     const EpochCallback& on_epoch = {});

struct ExperimentSummary {
  double mean_auc = 0.0;
  double std_auc = 0.0;  // population std over runs
  double best_auc = 0.0;
  std::vector<AnomalyReport> runs;  // ordered by seed
};

// Run i uses seed tcfg.seed + i. Runs are independent and may execute on up
// to `jobs` threads; aggregation is in seed order. Requires labels. Any
// failing run fails the experiment (the first error by seed is rethrown).
ExperimentSummary run_experiment(const AttributedGraph& g, const ModelConfig& cfg, const TrainConfig& tcfg,
                                 std::size_t n_runs = 10, std::size_t jobs = 1);

ExperimentSummary run_experiment_seeds(const AttributedGraph& g, const ModelConfig& cfg, const TrainConfig& tcfg,
                                       const std::vector<std::uint64_t>& seeds, std::size_t jobs = 1);

struct Grid {
  std::vector<double> lambda_x;
  std::vector<double> lambda_n;
  std::vector<std::size_t> hidden_dim;
};

struct GridPoint {
  ModelConfig config;
  double auc = 0.0;  // single-seed search AUC
};

struct GridSearchResult {
  ModelConfig best;
  std::vector<GridPoint> evaluated;  // in grid order (λ_x outer, then λ_n, then d)
  ExperimentSummary winner;          // winner re-run over `final_runs` seeds
};

// Trains every combination with tcfg.seed, keeps the best AUC (first in grid
// order on ties), then re-evaluates the winner over `final_runs` seeds.
GridSearchResult grid_search(const AttributedGraph& g, const Grid& grid, const ModelConfig& base,
                             const TrainConfig& tcfg, std::size_t final_runs = 10, std::size_t jobs = 1);

}  // namespace commgad
