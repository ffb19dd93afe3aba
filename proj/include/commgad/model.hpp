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
#include <string>
#include <vector>

#include "commgad/autodiff.hpp"
#include "commgad/community.hpp"
#include "commgad/gaussian.hpp"
#include "commgad/graph.hpp"
#include "commgad/matrix.hpp"

namespace commgad {

struct ModelConfig {
  std::size_t hidden_dim = 16;
  std::size_t gcn_layers = 2;
  double lambda_x = 1.0;
  double lambda_n = 0.5;
  double sigma_floor = kDefaultSigmaFloor;
  std::uint64_t seed = 0;

  // Throws ConfigError on d = 0, L = 0, non-finite or negative weights.
  void validate() const;
};

// y = x·w + b, w is in×out and b is 1×out.
struct Linear {
  Matrix w;
  Matrix b;
  friend bool operator==(const Linear&, const Linear&) = default;
};

// in → hidden (ReLU) → out (linear).
struct Mlp {
  Linear hidden;
  Linear out;
  friend bool operator==(const Mlp&, const Mlp&) = default;
};

// All learnable weights. Matrices are stored input-major (x·W), so the
// attribute encoder's W is kept as M×d.
struct ModelParams {
  Linear xi;                        // M → d, followed by ReLU
  std::vector<Matrix> gcn_weights;  // L × (d×d)
  Matrix w_residual;                // M×d
  Matrix attr_w;                    // M×d
  Matrix attr_b;                    // 1×d
  Matrix q, k, v;                   // d×d
  Matrix w1;                        // 2d×d
  Matrix w2;                        // d×2d
  Mlp phi_x;                        // d → d → M
  Mlp mlp_mu;                       // d → d → d
  Mlp mlp_sigma;                    // d → d → d

  // Zero-filled parameters of the right shapes.
  static ModelParams zeros(std::size_t feature_dim, const ModelConfig& cfg);
  // Glorot-uniform weights in ±√(6/(fan_in+fan_out)), zero biases, seeded
  // from derive_seed(cfg.seed, SeedStream::kInit).
  static ModelParams glorot(std::size_t feature_dim, const ModelConfig& cfg);

  // Every matrix in canonical order (the order fields are declared above,
  // weight before bias). Checkpoints and optimizers rely on this order.
  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;
  std::vector<std::string> names() const;

  std::size_t parameter_count() const;
  bool all_finite() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

// Everything the forward pass needs that depends only on the graph and its
// community assignment. Computed once per training run.
struct ModelInputs {
  Matrix features;           // X
  Matrix community_avg;      // X_avg
  SparseAdjacency a_hat;     // D̃^(−1/2)ÃD̃^(−1/2)
  NeighborLists neighbors;
  std::vector<double> has_neighbors;  // 1.0 / 0.0 per node

  std::size_t num_nodes() const { return features.rows(); }
};

ModelInputs prepare_inputs(const AttributedGraph& g, const CommunityAssignment& communities);

// Parameters as leaves on a tape, in canonical order.
struct BoundParams {
  struct BoundLinear {
    Tensor w, b;
  };
  struct BoundMlp {
    BoundLinear hidden, out;
  };
  BoundLinear xi;
  std::vector<Tensor> gcn_weights;
  Tensor w_residual, attr_w, attr_b, q, k, v, w1, w2;
  BoundMlp phi_x, mlp_mu, mlp_sigma;

  std::vector<Tensor> leaves;  // canonical order, matches ModelParams::tensors()
};

BoundParams bind(Tape& tape, const ModelParams& p);

// h0 = ReLU(ξ(X_avg)); h_l = ReLU(Â h_{l−1} W_l); H1 = h_L + Â X W_residual.
Tensor encode_structure(const SparseAdjacency& a_hat, const Tensor& x_avg, const Tensor& x, const BoundParams& p);

// H2 = ReLU(X W + b).
Tensor encode_attributes(const Tensor& x, const BoundParams& p);

struct FusionOutput {
  Tensor h1;          // H1'' (N×d)
  Tensor h2;          // H2'' (N×d)
  Tensor attn_from1;  // N×2 softmax row of the structural token over (token1, token2)
  Tensor attn_from2;  // N×2 softmax row of the attribute token
  Matrix attention_avg;  // 2×2 mean over nodes; row = query encoder, col = key encoder
};

// Two-token single-head self-attention per node (shared q,k,v, scale 1/√d),
// then concat → ·W1 (2d→d) → ·W2 (d→2d) → split into halves.
FusionOutput fuse(const Tensor& h1, const Tensor& h2, const BoundParams& p);

Tensor apply_mlp(const Tensor& x, const BoundParams::BoundMlp& mlp);

// x̂ = Φ_x(H2'').
Tensor decode_attributes(const Tensor& h2pp, const BoundParams& p);

struct NeighborhoodDecode {
  Tensor mu_gen, sigma_gen;    // MLP_μ(H1''), exp(MLP_σ(H1''))
  Tensor mu_true, sigma_true;  // neighbor mean/std of H1'', gradient blocked
};

// Target statistics to use instead of recomputing them from the current
// H1''. Lets the stop-gradient objective be evaluated at fixed targets.
struct NeighborTarget {
  Matrix mu;
  Matrix sigma;
};

NeighborhoodDecode decode_neighborhood(const Tensor& h1pp, const NeighborLists& neighbors, const BoundParams& p,
                                       const NeighborTarget* frozen = nullptr);

// Per node ½KL(P_t‖M) + ½KL(P_g‖M), M the moment-matched Gaussian midpoint
// (μ_m = (μ_t+μ_g)/2, σ_m² = (σ_t²+σ_g²)/2 + ((μ_t−μ_g)/2)²). N×1.
Tensor jsd_neighborhood_loss(const Tensor& mu_t, const Tensor& sigma_t, const Tensor& mu_g, const Tensor& sigma_g,
                             double sigma_floor = kDefaultSigmaFloor, std::size_t* clamped = nullptr);

// Per node ‖x_u − x̂_u‖² / M. N×1.
Tensor feature_loss(const Tensor& x, const Tensor& x_hat);

// λ_x Σ feature_loss + λ_n Σ h_loss. 1×1.
Tensor total_loss(const Tensor& feature_loss, const Tensor& h_loss, const ModelConfig& cfg);

struct ForwardOutput {
  std::vector<double> h_loss;        // 0 for isolated nodes
  std::vector<double> feature_loss;
  double total_loss = 0.0;
  Matrix attention_avg;              // 2×2
  Matrix node_attention;             // N×4: a, b, c, d per node
  std::size_t sigma_clamps = 0;
};

// A forward pass left on its tape so the caller can differentiate it.
struct TapedForward {
  ForwardOutput output;
  Tensor loss;
  BoundParams params;
  NeighborTarget target;  // the μ/σ targets that were used
};

TapedForward forward_on_tape(Tape& tape, const ModelInputs& inputs, const ModelConfig& cfg, const ModelParams& p,
                             const NeighborTarget* frozen = nullptr);

ForwardOutput forward(const ModelInputs& inputs, const ModelConfig& cfg, const ModelParams& p);

struct LossAndGrad {
  ForwardOutput output;
  ModelParams grad;
};

LossAndGrad loss_and_gradient(const ModelInputs& inputs, const ModelConfig& cfg, const ModelParams& p,
                              const NeighborTarget* frozen = nullptr);

}  // namespace commgad
