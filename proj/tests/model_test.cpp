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

#include "commgad/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "commgad/community.hpp"
#include "commgad/error.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace commgad {
namespace {

using testing::random_graph;
using testing::random_matrix;

ModelConfig tiny_config(std::size_t d = 4) {
  ModelConfig cfg;
  cfg.hidden_dim = d;
  return cfg;
}

TEST(ModelParams, ShapesNamesAndInit) {
  const auto cfg = tiny_config(4);
  const auto p = ModelParams::glorot(8, cfg);
  EXPECT_EQ(p.names().size(), p.tensors().size());
  EXPECT_EQ(p.gcn_weights.size(), 2u);
  EXPECT_EQ(p.w1.rows(), 8u);
  EXPECT_EQ(p.w2.cols(), 8u);
  EXPECT_EQ(p.phi_x.out.w.cols(), 8u);
  EXPECT_EQ(p.xi.b, Matrix(1, 4));
  EXPECT_EQ(p, ModelParams::glorot(8, cfg));
  auto other = cfg;
  other.seed = 1;
  EXPECT_NE(p, ModelParams::glorot(8, other));
  const double limit = std::sqrt(6.0 / (8 + 4));
  for (double v : p.attr_w.data()) EXPECT_LE(std::abs(v), limit);
}

TEST(ModelConfig, Validation) {
  ModelConfig cfg;
  cfg.hidden_dim = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.lambda_x = -1;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(StructureEncoder, ZeroWeightsGiveZero) {
  const auto g = random_graph(6, 3, 0.4, 1);
  const auto in = prepare_inputs(g, singleton_partition(6));
  Tape t;
  const auto bp = bind(t, ModelParams::zeros(3, tiny_config()));
  const Tensor h1 = encode_structure(in.a_hat, t.constant(in.community_avg), t.constant(in.features), bp);
  EXPECT_EQ(h1.value(), Matrix(6, 4));
}

TEST(StructureEncoder, EdgelessGraphDependsOnCommunityAverageOnly) {
  // Â = I; with ξ = I, identity GCN weights and no residual, H1 = ReLU(X_avg).
  Rng rng(2);
  const AttributedGraph g(5, {}, random_matrix(5, 3, rng));
  const auto comm = compact({0, 1, 0, 1, 1});
  const auto in = prepare_inputs(g, comm);
  auto cfg = tiny_config(3);
  auto p = ModelParams::zeros(3, cfg);
  p.xi.w = identity(3);
  for (auto& w : p.gcn_weights) w = identity(3);
  Tape t;
  const auto bp = bind(t, p);
  const Matrix h1 = encode_structure(in.a_hat, t.constant(in.community_avg), t.constant(in.features), bp).value();
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t k = 0; k < 3; ++k) EXPECT_DOUBLE_EQ(h1(i, k), std::max(0.0, in.community_avg(i, k)));
  EXPECT_EQ(h1.row(0)[0], h1.row(2)[0]);
}

TEST(StructureEncoder, TwoNodePathHandCase) {
  // X = [1; 3], singleton communities, ξ: w = 1, b = −2, one GCN layer w = 2,
  // residual 0.5. h0 = ReLU([−1; 1]) = [0; 1]; Â h0 = [0.5; 0.5]; ×2 → [1; 1];
  // Â X = [2; 2], ×0.5 → [1; 1]; H1 = [2; 2].
  const AttributedGraph g(2, {{0, 1}}, Matrix{{1}, {3}});
  const auto in = prepare_inputs(g, singleton_partition(2));
  auto cfg = tiny_config(1);
  cfg.gcn_layers = 1;
  auto p = ModelParams::zeros(1, cfg);
  p.xi.w = Matrix{{1}};
  p.xi.b = Matrix{{-2}};
  p.gcn_weights[0] = Matrix{{2}};
  p.w_residual = Matrix{{0.5}};
  Tape t;
  const auto bp = bind(t, p);
  EXPECT_EQ(encode_structure(in.a_hat, t.constant(in.community_avg), t.constant(in.features), bp).value(),
            (Matrix{{2}, {2}}));
}

TEST(AttributeEncoder, HandCases) {
  auto cfg = tiny_config(1);
  auto p = ModelParams::zeros(1, cfg);
  {
    Tape t;
    EXPECT_EQ(encode_attributes(t.constant(Matrix{{2}}), bind(t, p)).value(), (Matrix{{0}}));
  }
  p.attr_w = Matrix{{3}};
  p.attr_b = Matrix{{-1}};
  {
    Tape t;
    EXPECT_EQ(encode_attributes(t.constant(Matrix{{2}}), bind(t, p)).value(), (Matrix{{5}}));
    EXPECT_EQ(encode_attributes(t.constant(Matrix{{-2}}), bind(t, p)).value(), (Matrix{{0}}));
  }
}

TEST(Fusion, IdenticalTokensGiveUniformAttention) {
  Rng rng(3);
  auto p = ModelParams::glorot(2, tiny_config(4));
  const Matrix h = random_matrix(5, 4, rng);
  Tape t;
  const auto f = fuse(t.constant(h), t.constant(h), bind(t, p));
  for (double v : f.attention_avg.data()) EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Fusion, ZeroQueryGivesUniformAttention) {
  Rng rng(4);
  auto p = ModelParams::glorot(2, tiny_config(4));
  p.q = Matrix(4, 4);
  Tape t;
  const auto f = fuse(t.constant(random_matrix(5, 4, rng)), t.constant(random_matrix(5, 4, rng)), bind(t, p));
  for (double v : f.attention_avg.data()) EXPECT_DOUBLE_EQ(v, 0.5);
}

TEST(Fusion, OneDimHandCase) {
  // d = 1, q = k = v = 1, tokens h1 = 1, h2 = 2, W1 = [1; 1], W2 = [1, 2].
  auto p = ModelParams::zeros(1, tiny_config(1));
  p.q = p.k = p.v = Matrix{{1}};
  p.w1 = Matrix{{1}, {1}};
  p.w2 = Matrix{{1, 2}};
  Tape t;
  const auto f = fuse(t.constant(Matrix{{1}}), t.constant(Matrix{{2}}), bind(t, p));
  const double e = std::exp(1.0), e2 = std::exp(2.0);
  const double a = 1 / (1 + e), b = e / (1 + e);       // logits 1·1, 1·2
  const double c = 1 / (1 + e2), d = e2 / (1 + e2);    // logits 2·1, 2·2
  const double h1p = a * 1 + b * 2, h2p = c * 1 + d * 2;
  EXPECT_NEAR(f.attention_avg(0, 0), a, 1e-15);
  EXPECT_NEAR(f.attention_avg(0, 1), b, 1e-15);
  EXPECT_NEAR(f.attention_avg(1, 0), c, 1e-15);
  EXPECT_NEAR(f.attention_avg(1, 1), d, 1e-15);
  EXPECT_NEAR(f.h1.value()(0, 0), h1p + h2p, 1e-14);
  EXPECT_NEAR(f.h2.value()(0, 0), 2 * (h1p + h2p), 1e-14);
}

TEST(AttributeDecoder, Cases) {
  auto cfg = tiny_config(1);
  auto p = ModelParams::zeros(1, cfg);
  {
    Tape t;
    EXPECT_EQ(decode_attributes(t.constant(Matrix{{3}, {-1}}), bind(t, p)).value(), (Matrix{{0}, {0}}));
  }
  p.phi_x.hidden.w = Matrix{{1}};
  p.phi_x.out.w = Matrix{{1}};
  {
    Tape t;
    EXPECT_EQ(decode_attributes(t.constant(Matrix{{3}, {0.25}}), bind(t, p)).value(), (Matrix{{3}, {0.25}}));
  }
  Rng rng(5);
  auto p2 = ModelParams::glorot(7, tiny_config(4));
  Tape t;
  const Matrix out = decode_attributes(t.constant(random_matrix(9, 4, rng)), bind(t, p2)).value();
  EXPECT_EQ(out.rows(), 9u);
  EXPECT_EQ(out.cols(), 7u);
}

TEST(NeighborhoodDecoder, Cases) {
  // Star: hub 0 with leaves 1 and 2.
  const NeighborLists nb{{1, 2}, {0}, {0}};
  const Matrix h{{1, 1}, {2, 4}, {4, 0}};
  auto p = ModelParams::zeros(1, tiny_config(2));
  Tape t;
  const auto nd = decode_neighborhood(t.constant(h), nb, bind(t, p));
  EXPECT_EQ(nd.sigma_gen.value(), Matrix(3, 2, 1.0));
  EXPECT_EQ(nd.mu_true.value().row(0)[0], 3.0);
  EXPECT_EQ(nd.mu_true.value().row(0)[1], 2.0);
  EXPECT_EQ(nd.sigma_true.value().row(1)[0], 0.0);

  // A single-neighbor σ of 0 behaves exactly like σ = floor.
  const Tensor mu = t.constant(Matrix{{0.3}}), sg = t.constant(Matrix{{0.7}}), mg = t.constant(Matrix{{-0.2}});
  std::size_t clamped = 0;
  const double at_zero = jsd_neighborhood_loss(mu, t.constant(Matrix{{0.0}}), mg, sg, 1e-6, &clamped).value()(0, 0);
  const double at_floor = jsd_neighborhood_loss(mu, t.constant(Matrix{{1e-6}}), mg, sg, 1e-6).value()(0, 0);
  EXPECT_EQ(at_zero, at_floor);
  EXPECT_GE(clamped, 1u);
}

double jsd_value(const Matrix& mt, const Matrix& st, const Matrix& mg, const Matrix& sg) {
  Tape t;
  return jsd_neighborhood_loss(t.constant(mt), t.constant(st), t.constant(mg), t.constant(sg)).value()(0, 0);
}

TEST(JsdLoss, IdenticalIsZeroAndSymmetric) {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix mt = random_matrix(1, 3, rng), mg = random_matrix(1, 3, rng);
    Matrix st = random_matrix(1, 3, rng), sg = random_matrix(1, 3, rng);
    for (double& x : st.data()) x = std::abs(x) + 0.1;
    for (double& x : sg.data()) x = std::abs(x) + 0.1;
    EXPECT_NEAR(jsd_value(mt, st, mt, st), 0.0, 1e-14);
    EXPECT_NEAR(jsd_value(mt, st, mg, sg), jsd_value(mg, sg, mt, st), 1e-12);
    EXPECT_GE(jsd_value(mt, st, mg, sg), 0.0);
  }
}

TEST(JsdLoss, OneDimMatchesMonteCarlo) {
  Rng rng(7);
  const auto [est, se] = oracle::jsd_monte_carlo({0.0}, {1.0}, {2.0}, {1.0}, 1000000, rng);
  EXPECT_NEAR(jsd_value(Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{2.0}}, Matrix{{1.0}}), est, 3 * se);
}

TEST(JsdLoss, GradientMatchesFiniteDifferences) {
  Rng rng(8);
  Matrix mt = random_matrix(3, 2, rng), mg = random_matrix(3, 2, rng);
  Matrix st = random_matrix(3, 2, rng), sg = random_matrix(3, 2, rng);
  for (double& x : st.data()) x = std::abs(x) + 0.2;
  for (double& x : sg.data()) x = std::abs(x) + 0.2;
  auto value = [&](const Matrix& a, const Matrix& b, const Matrix& c, const Matrix& e, std::vector<Matrix>* g) {
    Tape t;
    std::vector<Tensor> leaves{t.leaf(a), t.leaf(b), t.leaf(c), t.leaf(e)};
    const Tensor loss = ad::sum_all(jsd_neighborhood_loss(leaves[0], leaves[1], leaves[2], leaves[3]));
    if (g) {
      t.backward(loss);
      g->clear();
      for (auto& l : leaves) g->push_back(l.grad());
    }
    return loss.value()(0, 0);
  };
  std::vector<Matrix> in{mt, st, mg, sg}, grads;
  value(in[0], in[1], in[2], in[3], &grads);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t i = 0; i < in[k].size(); ++i) {
      auto up = in, down = in;
      up[k].data()[i] += 1e-6;
      down[k].data()[i] -= 1e-6;
      const double fd = (value(up[0], up[1], up[2], up[3], nullptr) - value(down[0], down[1], down[2], down[3], nullptr)) / 2e-6;
      EXPECT_NEAR(grads[k].data()[i], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(FeatureLoss, Cases) {
  Tape t;
  EXPECT_EQ(feature_loss(t.constant(Matrix{{1, 2}}), t.constant(Matrix{{1, 2}})).value(), (Matrix{{0}}));
  EXPECT_EQ(feature_loss(t.constant(Matrix{{1, 0}}), t.constant(Matrix{{0, 0}})).value(), (Matrix{{0.5}}));
  EXPECT_THROW(feature_loss(t.constant(Matrix(2, 2)), t.constant(Matrix(2, 3))), ShapeError);
  const Matrix f1 = feature_loss(t.constant(Matrix{{1, 2}, {3, 4}}), t.constant(Matrix{{0, 2}, {1, 1}})).value();
  const Matrix f2 = feature_loss(t.constant(Matrix{{3, 4}, {1, 2}}), t.constant(Matrix{{1, 1}, {0, 2}})).value();
  EXPECT_EQ(f1(0, 0), f2(1, 0));
  EXPECT_EQ(f1(1, 0), f2(0, 0));
}

TEST(TotalLoss, WeightsSelectComponents) {
  Tape t;
  const Tensor f = t.constant(Matrix{{1.0}, {2.0}});
  const Tensor h = t.constant(Matrix{{0.25}, {0.5}});
  ModelConfig cfg;
  cfg.lambda_x = 0;
  cfg.lambda_n = 1;
  EXPECT_DOUBLE_EQ(total_loss(f, h, cfg).value()(0, 0), 0.75);
  cfg.lambda_x = 1;
  cfg.lambda_n = 0;
  EXPECT_DOUBLE_EQ(total_loss(f, h, cfg).value()(0, 0), 3.0);
  cfg.lambda_n = 1;
  EXPECT_DOUBLE_EQ(total_loss(f, h, cfg).value()(0, 0), 3.75);
}

TEST(Forward, InvariantsOnRandomGraphs) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto g = random_graph(30, 6, 0.1, s);
    auto cfg = tiny_config(5);
    cfg.seed = s;
    const auto in = prepare_inputs(g, louvain(g, s));
    const auto out = forward(in, cfg, ModelParams::glorot(6, cfg));
    for (std::size_t i = 0; i < 30; ++i) {
      EXPECT_NEAR(out.node_attention(i, 0) + out.node_attention(i, 1), 1.0, 1e-9);
      EXPECT_NEAR(out.node_attention(i, 2) + out.node_attention(i, 3), 1.0, 1e-9);
      EXPECT_GE(out.h_loss[i], 0.0);
      EXPECT_GE(out.feature_loss[i], 0.0);
      if (g.degree(i) == 0) {
        EXPECT_EQ(out.h_loss[i], 0.0);
      }
    }
    const double sum_f = std::accumulate(out.feature_loss.begin(), out.feature_loss.end(), 0.0);
    const double sum_h = std::accumulate(out.h_loss.begin(), out.h_loss.end(), 0.0);
    EXPECT_NEAR(out.total_loss, cfg.lambda_x * sum_f + cfg.lambda_n * sum_h, 1e-9 * (1 + out.total_loss));
  }
}

TEST(Forward, FrozenTargetGivesSameGradient) {
  const auto g = random_graph(15, 4, 0.3, 9);
  auto cfg = tiny_config(3);
  const auto in = prepare_inputs(g, louvain(g, 0));
  const auto p = ModelParams::glorot(4, cfg);
  Tape t;
  const auto target = forward_on_tape(t, in, cfg, p).target;
  const auto live = loss_and_gradient(in, cfg, p);
  const auto frozen = loss_and_gradient(in, cfg, p, &target);
  EXPECT_EQ(live.output.total_loss, frozen.output.total_loss);
  EXPECT_EQ(live.grad, frozen.grad);
}

TEST(Forward, ParameterGradientMatchesFiniteDifferences) {
  const auto g = random_graph(10, 3, 0.3, 21);
  auto cfg = tiny_config(2);
  cfg.seed = 21;
  const auto in = prepare_inputs(g, louvain(g, 0));
  const auto r = oracle::check_model_gradient(in, cfg, ModelParams::glorot(3, cfg), 1e-5, 1e-6);
  EXPECT_LE(r.max_rel_error, 1e-4) << r.worst_param;
  EXPECT_GT(r.entries, 0u);
}

TEST(Forward, NodePermutationEquivariance) {
  const auto g = random_graph(25, 5, 0.15, 12);
  auto cfg = tiny_config(4);
  const auto comm = louvain(g, 0);
  std::vector<NodeId> perm(25);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(13);
  rng.shuffle(std::span<NodeId>(perm));
  std::vector<Edge> e;
  for (const auto& [u, v] : g.edges()) e.emplace_back(perm[u], perm[v]);
  Matrix x(25, 5);
  std::vector<std::uint32_t> c(25);
  for (std::size_t i = 0; i < 25; ++i) {
    for (std::size_t k = 0; k < 5; ++k) x(perm[i], k) = g.features()(i, k);
    c[perm[i]] = comm.labels[i];
  }
  const AttributedGraph pg(25, e, x);
  const auto p = ModelParams::glorot(5, cfg);
  const auto a = forward(prepare_inputs(g, comm), cfg, p);
  const auto b = forward(prepare_inputs(pg, compact(c)), cfg, p);
  for (std::size_t i = 0; i < 25; ++i) {
    EXPECT_NEAR(a.h_loss[i], b.h_loss[perm[i]], 1e-9);
    EXPECT_NEAR(a.feature_loss[i], b.feature_loss[perm[i]], 1e-9);
  }
}

}  // namespace
}  // namespace commgad
