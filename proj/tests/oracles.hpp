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

// Independent reference computations shared by the unit tests and the
// acceptance runner.

#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <utility>
#include <vector>

#include "commgad/community.hpp"
#include "commgad/graph.hpp"
#include "commgad/model.hpp"
#include "commgad/random.hpp"

namespace commgad::oracle {

// Fraction of (anomaly, normal) pairs ranked correctly, ties count ½.
inline double brute_force_auc(const std::vector<double>& s, const std::vector<int>& y) {
  double wins = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j] != 0) continue;
      ++pairs;
      if (s[i] > s[j]) {
        wins += 1;
      } else if (s[i] == s[j]) {
        wins += 0.5;
      }
    }
  }
  return wins / static_cast<double>(pairs);
}

inline Matrix dense_product(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
  return c;
}

// Monte-Carlo estimate of ½ KL(P_t‖M) + ½ KL(P_g‖M), M the moment-matched
// Gaussian of the two diagonal Gaussians. Returns (estimate, standard error).
inline std::pair<double, double> jsd_monte_carlo(const std::vector<double>& mt, const std::vector<double>& st,
                                                 const std::vector<double>& mg, const std::vector<double>& sg,
                                                 std::size_t samples, Rng& rng) {
  const std::size_t d = mt.size();
  std::vector<double> mm(d), sm(d);
  for (std::size_t k = 0; k < d; ++k) {
    mm[k] = 0.5 * (mt[k] + mg[k]);
    sm[k] = std::sqrt(0.5 * (st[k] * st[k] + sg[k] * sg[k]) + 0.25 * (mt[k] - mg[k]) * (mt[k] - mg[k]));
  }
  auto log_density = [&](const std::vector<double>& x, const std::vector<double>& m, const std::vector<double>& s) {
    double l = 0;
    for (std::size_t k = 0; k < d; ++k) {
      const double z = (x[k] - m[k]) / s[k];
      l += -0.5 * z * z - std::log(s[k]) - 0.5 * std::log(2 * std::numbers::pi);
    }
    return l;
  };
  auto term = [&](const std::vector<double>& m, const std::vector<double>& s, double& mean, double& var) {
    std::vector<double> x(d);
    double sum = 0, sum2 = 0;
    for (std::size_t i = 0; i < samples; ++i) {
      for (std::size_t k = 0; k < d; ++k) x[k] = rng.normal(m[k], s[k]);
      const double r = log_density(x, m, s) - log_density(x, mm, sm);
      sum += r;
      sum2 += r * r;
    }
    const double n = static_cast<double>(samples);
    mean = sum / n;
    var = (sum2 / n - mean * mean) * n / (n - 1);
  };
  double m1, v1, m2, v2;
  term(mt, st, m1, v1);
  term(mg, sg, m2, v2);
  const double n = static_cast<double>(samples);
  return {0.5 * (m1 + m2), 0.5 * std::sqrt(v1 / n + v2 / n)};
}

// Q = 1/(2m) Σ_ij [A_ij − k_i k_j / 2m] δ(c_i, c_j) on the dense adjacency.
inline double dense_modularity(const AttributedGraph& g, const std::vector<std::uint32_t>& c) {
  const std::size_t n = g.num_nodes();
  Matrix a(n, n);
  for (const auto& [u, v] : g.edges()) a(u, v) = a(v, u) = 1.0;
  const double two_m = 2.0 * static_cast<double>(g.num_edges());
  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (c[i] == c[j]) q += a(i, j) - static_cast<double>(g.degree(i) * g.degree(j)) / two_m;
  return q / two_m;
}

// Calls fn on every set partition of n ≥ 1 nodes, as restricted growth strings.
inline void for_each_partition(std::size_t n, const std::function<void(const std::vector<std::uint32_t>&)>& fn) {
  std::vector<std::uint32_t> c(n, 0);
  std::function<void(std::size_t, std::uint32_t)> rec = [&](std::size_t i, std::uint32_t max_used) {
    if (i == n) {
      fn(c);
      return;
    }
    for (std::uint32_t k = 0; k <= max_used + 1; ++k) {
      c[i] = k;
      rec(i + 1, std::max(max_used, k));
    }
  };
  rec(1, 0);
}

// Modularity-maximizing partition by exhaustive search (first in
// enumeration order on ties).
inline CommunityAssignment best_partition(const AttributedGraph& g, double* best_q = nullptr) {
  double best = -2.0;
  std::vector<std::uint32_t> arg;
  for_each_partition(g.num_nodes(), [&](const std::vector<std::uint32_t>& c) {
    const double q = dense_modularity(g, c);
    if (q > best + 1e-12) {
      best = q;
      arg = c;
    }
  });
  if (best_q) *best_q = best;
  return compact(arg);
}

struct GradCheck {
  double max_rel_error = 0.0;
  std::string worst_param;
  std::size_t entries = 0;
};

// Central differences of the total loss for every parameter entry, with the
// neighbor targets frozen at the unperturbed pass (they are constants in the
// objective). Relative error is |g − fd| / max(|g|, |fd|, floor).
inline GradCheck check_model_gradient(const ModelInputs& in, const ModelConfig& cfg, const ModelParams& p,
                                      double step, double floor) {
  Tape tape;
  const NeighborTarget target = forward_on_tape(tape, in, cfg, p).target;
  const LossAndGrad lg = loss_and_gradient(in, cfg, p, &target);
  ModelParams probe = p;
  const auto names = p.names();
  auto probe_tensors = probe.tensors();
  const auto grad_tensors = lg.grad.tensors();
  GradCheck out;
  for (std::size_t t = 0; t < probe_tensors.size(); ++t) {
    Matrix& m = *probe_tensors[t];
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double x0 = m.data()[i];
      m.data()[i] = x0 + step;
      const double up = loss_and_gradient(in, cfg, probe, &target).output.total_loss;
      m.data()[i] = x0 - step;
      const double down = loss_and_gradient(in, cfg, probe, &target).output.total_loss;
      m.data()[i] = x0;
      const double fd = (up - down) / (2 * step);
      const double g = grad_tensors[t]->data()[i];
      const double err = std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), floor});
      ++out.entries;
      if (err > out.max_rel_error) {
        out.max_rel_error = err;
        out.worst_param = names[t] + "[" + std::to_string(i) + "]";
      }
    }
  }
  return out;
}

}  // namespace commgad::oracle
