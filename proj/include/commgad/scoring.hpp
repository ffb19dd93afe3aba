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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commgad/matrix.hpp"
#include "commgad/model.hpp"

namespace commgad {

struct ScoreWeights {
  double lambda_n = 1.0;  // weight of the neighborhood loss (attention on encoder 1)
  double lambda_x = 1.0;  // weight of the feature loss (attention on encoder 2)
};

// Column sums of the node-averaged 2×2 attention matrix [[a, b], [c, d]]:
// λ'_n = a + c, λ'_x = b + d. Throws ShapeError unless the input is 2×2 with
// finite, non-negative entries and rows summing to 1 (within 1e-6).
ScoreWeights derive_score_weights(const Matrix& attention_avg);

// Min-max scaling to [0, 1]; a constant vector maps to zeros.
std::vector<double> normalize_losses(std::span<const double> v);

// λ'_n · minmax(h_loss) + λ'_x · minmax(feature_loss).
std::vector<double> anomaly_scores(std::span<const double> h_loss, std::span<const double> feature_loss,
                                   const ScoreWeights& w);

// Probability that a random anomaly outscores a random normal node, ties
// counted ½ (midrank statistic). Throws UndefinedMetricError unless both
// classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

struct RunMeta {
  std::uint64_t seed = 0;
  ModelConfig model;
  std::size_t epochs = 0;
  std::string community_algorithm;
  std::size_t num_communities = 0;
  double train_seconds = 0.0;
  double mean_epoch_seconds = 0.0;
};

struct AnomalyReport {
  std::vector<double> scores;
  ScoreWeights weights;
  Matrix attention_avg;
  std::optional<double> auc;
  RunMeta meta;
};

// Scores a finished forward pass; computes AUC when labels are given.
AnomalyReport score_output(const ForwardOutput& out, const std::optional<std::vector<int>>& labels);

std::string report_to_json(const AnomalyReport& r);
// "node_id,score[,label]" rows sorted by descending score, ties by node id.
std::string scores_to_csv(const AnomalyReport& r, const std::optional<std::vector<int>>& labels);

}  // namespace commgad
