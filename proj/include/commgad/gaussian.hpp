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
#include <vector>

#include "commgad/autodiff.hpp"
#include "commgad/graph.hpp"

namespace commgad {

inline constexpr double kDefaultSigmaFloor = 1e-6;

using NeighborLists = std::vector<std::vector<NodeId>>;

NeighborLists neighbor_lists(const AttributedGraph& g);

struct SegmentStats {
  Tensor mean;                 // N×d
  Tensor stddev;               // N×d, population std
  std::vector<char> isolated;  // 1 where the neighbor list is empty (rows are 0)
};

// Per node v: mean and population standard deviation of rows {h_u : u ∈ N(v)}.
// Differentiable w.r.t. h; at σ = 0 the subgradient is taken as 0.
SegmentStats segment_mean_std(const Tensor& h, const NeighborLists& neighbors);

// Per-row KL(N(μ1, diag σ1²) ‖ N(μ2, diag σ2²)), summed over columns:
//   Σ_k ln(σ2/σ1) + (σ1² + (μ1 − μ2)²) / (2σ2²) − ½
// Sigma entries below `sigma_floor` are clamped (no gradient through the
// clamped entries) and counted into `clamped`. Returns N×1.
Tensor gaussian_kl(const Tensor& mu1, const Tensor& sigma1, const Tensor& mu2, const Tensor& sigma2,
                   double sigma_floor = kDefaultSigmaFloor, std::size_t* clamped = nullptr);

}  // namespace commgad
