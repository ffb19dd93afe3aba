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

#include "commgad/scoring.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "json.hpp"

#include "commgad/error.hpp"

namespace commgad {

ScoreWeights derive_score_weights(const Matrix& att) {
  if (att.rows() != 2 || att.cols() != 2) {
    throw ShapeError("attention matrix must be 2x2, got " + att.shape_string());
  }
  for (double v : att.data()) {
    if (!std::isfinite(v) || v < 0.0) throw ShapeError("attention matrix has a negative or non-finite entry");
  }
  for (std::size_t r = 0; r < 2; ++r) {
    if (std::abs(att(r, 0) + att(r, 1) - 1.0) > 1e-6) throw ShapeError("attention matrix rows must sum to 1");
  }
  return {att(0, 0) + att(1, 0), att(0, 1) + att(1, 1)};
}

std::vector<double> normalize_losses(std::span<const double> v) {
  std::vector<double> out(v.size(), 0.0);
  if (v.empty()) return out;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = (v[i] - *lo) / range;
  return out;
}

std::vector<double> anomaly_scores(std::span<const double> h_loss, std::span<const double> feature_loss,
                                   const ScoreWeights& w) {
  if (h_loss.size() != feature_loss.size()) throw ShapeError("anomaly_scores: loss vectors differ in length");
  const auto h = normalize_losses(h_loss);
  const auto f = normalize_losses(feature_loss);
  std::vector<double> s(h.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = w.lambda_n * h[i] + w.lambda_x * f[i];
  return s;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ShapeError("auc: scores and labels differ in length");
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Sum of midranks of the positives (Mann-Whitney U).
  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // ranks i+1..j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum += midrank;
        ++positives;
      } else if (labels[order[k]] != 0) {
        throw ShapeError("auc: labels must be 0 or 1");
      }
    }
    i = j;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) throw UndefinedMetricError("auc needs at least one anomaly and one normal node");
  const double p = static_cast<double>(positives), q = static_cast<double>(negatives);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * q);
}

AnomalyReport score_output(const ForwardOutput& out, const std::optional<std::vector<int>>& labels) {
  AnomalyReport r;
  r.attention_avg = out.attention_avg;
  r.weights = derive_score_weights(out.attention_avg);
  r.scores = anomaly_scores(out.h_loss, out.feature_loss, r.weights);
  if (labels) r.auc = auc(r.scores, *labels);
  return r;
}

std::string report_to_json(const AnomalyReport& r) {
  nlohmann::json j;
  j["num_nodes"] = r.scores.size();
  j["scores"] = r.scores;
  j["lambda_n_prime"] = r.weights.lambda_n;
  j["lambda_x_prime"] = r.weights.lambda_x;
  j["attention_avg"] = {{r.attention_avg(0, 0), r.attention_avg(0, 1)}, {r.attention_avg(1, 0), r.attention_avg(1, 1)}};
  j["auc"] = r.auc ? nlohmann::json(*r.auc) : nlohmann::json(nullptr);
  const RunMeta& m = r.meta;
  j["run_meta"] = {{"seed", m.seed},
                   {"config",
                    {{"hidden_dim", m.model.hidden_dim},
                     {"gcn_layers", m.model.gcn_layers},
                     {"lambda_x", m.model.lambda_x},
                     {"lambda_n", m.model.lambda_n},
                     {"sigma_floor", m.model.sigma_floor}}},
                   {"epochs", m.epochs},
                   {"community_algorithm", m.community_algorithm},
                   {"num_communities", m.num_communities},
                   {"train_seconds", m.train_seconds},
                   {"mean_epoch_seconds", m.mean_epoch_seconds}};
  return j.dump(2);
}

std::string scores_to_csv(const AnomalyReport& r, const std::optional<std::vector<int>>& labels) {
  const std::size_t n = r.scores.size();
  if (labels && labels->size() != n) throw ShapeError("scores_to_csv: label count does not match scores");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });
  std::string out = labels ? "node_id,score,label\n" : "node_id,score\n";
  char buf[32];
  for (std::size_t i : order) {
    out += std::to_string(i);
    out += ',';
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, r.scores[i]);
    out.append(buf, ptr);
    if (labels) {
      out += ',';
      out += std::to_string((*labels)[i]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace commgad
