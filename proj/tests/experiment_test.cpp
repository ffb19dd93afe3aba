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

#include "commgad/experiment.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "commgad/synthetic.hpp"
#include "test_util.hpp"

namespace commgad {
namespace {

AttributedGraph small_labelled(std::uint64_t seed = 0) {
  SyntheticConfig sc;
  sc.num_nodes = 60;
  sc.avg_degree = 6;
  sc.feature_dim = 6;
  sc.num_communities = 3;
  sc.seed = seed;
  InjectionConfig ic;
  ic.n_structural = 4;
  ic.clique_size = 4;
  ic.n_contextual = 3;
  ic.swap_candidates = 20;
  ic.seed = seed;
  return inject_anomalies(generate_synthetic(sc).graph, ic).graph;
}

TrainConfig quick(std::size_t epochs = 5) {
  TrainConfig t;
  t.epochs = epochs;
  return t;
}

ModelConfig small_model() {
  ModelConfig m;
  m.hidden_dim = 4;
  return m;
}

TEST(Experiment, SingleRunHasZeroStd) {
  const auto s = run_experiment(small_labelled(), small_model(), quick(), 1);
  ASSERT_EQ(s.runs.size(), 1u);
  EXPECT_EQ(s.std_auc, 0.0);
  EXPECT_EQ(s.mean_auc, *s.runs[0].auc);
  EXPECT_EQ(s.best_auc, s.mean_auc);
}

TEST(Experiment, RepeatedSeedGivesIdenticalRuns) {
  const auto s = run_experiment_seeds(small_labelled(), small_model(), quick(), {4, 4});
  EXPECT_EQ(*s.runs[0].auc, *s.runs[1].auc);
  EXPECT_EQ(s.runs[0].scores, s.runs[1].scores);
  EXPECT_EQ(s.std_auc, 0.0);
}

TEST(Experiment, SeedsAreConsecutiveAndStatsArePopulation) {
  auto t = quick();
  t.seed = 10;
  const auto s = run_experiment(small_labelled(), small_model(), t, 3);
  ASSERT_EQ(s.runs.size(), 3u);
  double mean = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(s.runs[i].meta.seed, 10 + i);
    mean += *s.runs[i].auc / 3;
  }
  double var = 0;
  for (const auto& r : s.runs) var += (*r.auc - mean) * (*r.auc - mean) / 3;
  EXPECT_NEAR(s.mean_auc, mean, 1e-15);
  EXPECT_NEAR(s.std_auc, std::sqrt(var), 1e-15);
}

TEST(Experiment, ThreadCountDoesNotChangeResults) {
  const auto g = small_labelled(1);
  const auto a = run_experiment(g, small_model(), quick(), 3, 1);
  const auto b = run_experiment(g, small_model(), quick(), 3, 3);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a.runs[i].scores, b.runs[i].scores);
  EXPECT_EQ(a.mean_auc, b.mean_auc);
}

TEST(GridSearch, SingletonGridReturnsIt) {
  Grid grid{{0.7}, {0.1}, {8}};
  const auto r = grid_search(small_labelled(), grid, ModelConfig{}, quick(), 2);
  EXPECT_EQ(r.best.lambda_x, 0.7);
  EXPECT_EQ(r.best.lambda_n, 0.1);
  EXPECT_EQ(r.best.hidden_dim, 8u);
  EXPECT_EQ(r.evaluated.size(), 1u);
  EXPECT_EQ(r.winner.runs.size(), 2u);
}

TEST(GridSearch, PicksBestInGridOrder) {
  Grid grid{{0.5, 1.0}, {0.1, 0.5}, {4}};
  const auto r = grid_search(small_labelled(), grid, ModelConfig{}, quick(), 1);
  ASSERT_EQ(r.evaluated.size(), 4u);
  EXPECT_EQ(r.evaluated[1].config.lambda_x, 0.5);
  EXPECT_EQ(r.evaluated[1].config.lambda_n, 0.5);
  double best = -1;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (r.evaluated[i].auc > best) {
      best = r.evaluated[i].auc;
      arg = i;
    }
  }
  EXPECT_EQ(r.best.lambda_x, r.evaluated[arg].config.lambda_x);
  EXPECT_EQ(r.best.lambda_n, r.evaluated[arg].config.lambda_n);
}

TEST(GridSearch, ZeroWeightsAreANoOpObjective) {
  // With λ_x = λ_n = 0 the gradient vanishes, so training leaves the
  // initialization in place. On labels independent of the graph the AUC
  // should sit near the ½ of a constant scorer.
  auto g = small_labelled(2);
  Rng rng(99);
  std::vector<int> y(g.num_nodes());
  for (auto& v : y) v = rng.uniform() < 0.5;
  g = g.with_labels(y);
  ModelConfig m = small_model();
  m.lambda_x = m.lambda_n = 0;
  const auto tr = train(g, m, quick(3));
  m.seed = 0;
  EXPECT_EQ(tr.params, ModelParams::glorot(g.feature_dim(), m));
  const auto r = grid_search(g, Grid{{0.0}, {0.0}, {4}}, small_model(), quick(3), 1);
  EXPECT_NEAR(r.winner.mean_auc, 0.5, 0.2);
}

TEST(Detect, ReportCarriesMeta) {
  auto t = quick(3);
  t.seed = 5;
  const auto r = detect(small_labelled(), small_model(), t);
  EXPECT_EQ(r.meta.seed, 5u);
  EXPECT_EQ(r.meta.epochs, 3u);
  EXPECT_EQ(r.meta.community_algorithm, "louvain");
  EXPECT_GE(r.meta.num_communities, 1u);
  EXPECT_NEAR(r.weights.lambda_n + r.weights.lambda_x, 2.0, 1e-9);
}

}  // namespace
}  // namespace commgad
