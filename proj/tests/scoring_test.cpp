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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "commgad/error.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace commgad {
namespace {

using oracle::brute_force_auc;

std::vector<std::size_t> argsort(const std::vector<double>& v) {
  std::vector<std::size_t> o(v.size());
  std::iota(o.begin(), o.end(), 0);
  std::stable_sort(o.begin(), o.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  return o;
}

TEST(ScoreWeights, ColumnSums) {
  auto w = derive_score_weights(Matrix{{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_EQ(w.lambda_n, 1.0);
  EXPECT_EQ(w.lambda_x, 1.0);
  w = derive_score_weights(Matrix{{1, 0}, {1, 0}});
  EXPECT_EQ(w.lambda_n, 2.0);
  EXPECT_EQ(w.lambda_x, 0.0);
  w = derive_score_weights(Matrix{{0.8, 0.2}, {0.6, 0.4}});
  EXPECT_NEAR(w.lambda_n, 1.4, 1e-15);
  EXPECT_NEAR(w.lambda_x, 0.6, 1e-15);
}

TEST(ScoreWeights, RejectsNonStochastic) {
  EXPECT_THROW(derive_score_weights(Matrix(2, 3)), ShapeError);
  EXPECT_THROW(derive_score_weights(Matrix{{0.5, 0.6}, {0.5, 0.5}}), ShapeError);
  EXPECT_THROW(derive_score_weights(Matrix{{1.5, -0.5}, {0.5, 0.5}}), ShapeError);
  EXPECT_THROW(derive_score_weights(Matrix{{NAN, 0.5}, {0.5, 0.5}}), ShapeError);
}

TEST(Normalize, Cases) {
  const std::vector<double> a{0, 5, 10};
  EXPECT_EQ(normalize_losses(a), (std::vector<double>{0, 0.5, 1}));
  const std::vector<double> c{3, 3, 3};
  EXPECT_EQ(normalize_losses(c), (std::vector<double>{0, 0, 0}));
  const std::vector<double> u{0, 0.25, 1};
  EXPECT_EQ(normalize_losses(u), u);
}

TEST(AnomalyScores, Cases) {
  const std::vector<double> h{0, 1}, f{1, 0};
  const auto s = anomaly_scores(h, f, {1.4, 0.6});
  EXPECT_NEAR(s[0], 0.6, 1e-15);
  EXPECT_NEAR(s[1], 1.4, 1e-15);

  const std::vector<double> h2{3, 1, 2, 7}, f2{9, 1, 4, 0};
  EXPECT_EQ(argsort(anomaly_scores(h2, f2, {2.0, 0.0})), argsort(h2));
  const auto both = anomaly_scores(h2, h2, {1.3, 0.7});
  const auto hn = normalize_losses(h2);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(both[i], 2.0 * hn[i], 1e-15);
}

TEST(AnomalyScores, ArgsortInvariantUnderCommonScaling) {
  Rng rng(1);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> h(30), f(30);
    for (auto& x : h) x = rng.uniform();
    for (auto& x : f) x = rng.uniform();
    const ScoreWeights w{rng.uniform(0, 2), rng.uniform(0, 2)};
    const double c = rng.uniform(0.1, 10);
    const auto a = anomaly_scores(h, f, w);
    const auto b = anomaly_scores(h, f, {w.lambda_n * c, w.lambda_x * c});
    const auto oa = argsort(a), ob = argsort(b);
    for (std::size_t i = 0; i + 1 < 30; ++i) {
      // Equal up to rounding-level ties.
      if (std::abs(a[oa[i]] - a[oa[i + 1]]) > 1e-12) {
        EXPECT_EQ(oa[i], ob[i]);
      }
    }
  }
}

TEST(Auc, HandCases) {
  const std::vector<double> s{0.9, 0.1, 0.5, 0.4};
  const std::vector<int> y{1, 0, 1, 0};
  EXPECT_EQ(auc(s, y), 1.0);
  const std::vector<double> flat{1, 1, 1, 1};
  EXPECT_EQ(auc(flat, y), 0.5);
  const std::vector<int> one_class{1, 1, 1, 1};
  EXPECT_THROW(auc(s, one_class), UndefinedMetricError);
}

TEST(Auc, MatchesBruteForceExactly) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.below(199);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(20)) / 4.0;  // many ties
      y[i] = rng.uniform() < 0.3 ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    const double a = auc(s, y);
    EXPECT_EQ(a, brute_force_auc(s, y));
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(Auc, InvariantUnderMonotoneTransform) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> s(50), e(50);
    std::vector<int> y(50);
    for (std::size_t i = 0; i < 50; ++i) {
      s[i] = rng.uniform(-2, 2);
      e[i] = std::exp(3 * s[i]) + 1;
      y[i] = i % 3 == 0;
    }
    EXPECT_EQ(auc(s, y), auc(e, y));
  }
}

TEST(Report, JsonAndCsv) {
  ForwardOutput out;
  out.h_loss = {0.0, 1.0, 0.5};
  out.feature_loss = {1.0, 0.0, 0.5};
  out.attention_avg = Matrix{{0.5, 0.5}, {0.5, 0.5}};
  const std::vector<int> labels{0, 1, 0};
  const auto r = score_output(out, labels);
  EXPECT_NEAR(r.weights.lambda_n + r.weights.lambda_x, 2.0, 1e-9);
  ASSERT_TRUE(r.auc);
  const auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j["scores"].size(), 3u);
  EXPECT_TRUE(j.contains("run_meta"));
  EXPECT_TRUE(j.contains("attention_avg"));
  // All three scores tie at 1.0; ties keep node-id order.
  EXPECT_EQ(scores_to_csv(r, labels), "node_id,score,label\n0,1,0\n1,1,1\n2,1,0\n");
  EXPECT_EQ(scores_to_csv(r, std::nullopt).substr(0, 14), "node_id,score\n");
}

}  // namespace
}  // namespace commgad
