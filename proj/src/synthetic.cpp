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

#include "commgad/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "commgad/error.hpp"
#include "commgad/random.hpp"

namespace commgad {

SyntheticGraph generate_planted(std::size_t n, std::size_t m, std::size_t k, double p_in, double p_out,
                                std::uint64_t seed, double center_scale, double feature_noise) {
  if (k < 1 || n < k) throw ConfigError("generate_synthetic: need n >= num_communities >= 1");
  if (m < 1) throw ConfigError("generate_synthetic: feature_dim must be >= 1");
  if (!(p_in >= 0.0 && p_in <= 1.0 && p_out >= 0.0 && p_out <= 1.0)) {
    throw ConfigError("generate_synthetic: infeasible degree (link probability outside [0, 1])");
  }
  Rng rng(derive_seed(seed, SeedStream::kSynthetic));
  SyntheticGraph out;
  out.p_in = p_in;
  out.p_out = p_out;
  out.planted.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.planted[i] = static_cast<std::uint32_t>(i * k / n);

  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double p = out.planted[i] == out.planted[j] ? p_in : p_out;
      if (rng.uniform() < p) edges.emplace_back(static_cast<NodeId>(i), static_cast<NodeId>(j));
    }
  }

  Matrix centers(k, m);
  for (double& v : centers.data()) v = rng.normal(0.0, center_scale);
  Matrix x(n, m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = centers.row(out.planted[i]);
    auto r = x.row(i);
    for (std::size_t j = 0; j < m; ++j) r[j] = c[j] + rng.normal(0.0, feature_noise);
  }
  out.graph = AttributedGraph(n, std::move(edges), std::move(x));
  return out;
}

SyntheticGraph generate_synthetic(const SyntheticConfig& cfg) {
  const std::size_t n = cfg.num_nodes, k = cfg.num_communities;
  if (k < 1 || n < k) throw ConfigError("generate_synthetic: need n >= num_communities >= 1");
  if (!(cfg.avg_degree >= 0.0) || !(cfg.intra_fraction >= 0.0 && cfg.intra_fraction <= 1.0)) {
    throw ConfigError("generate_synthetic: avg_degree must be >= 0 and intra_fraction in [0, 1]");
  }
  // Expected degree: p_in·(s − 1) + p_out·(n − s), s = n / K.
  const double s = static_cast<double>(n) / static_cast<double>(k);
  const double intra_slots = s - 1.0;
  const double inter_slots = static_cast<double>(n) - s;
  double intra_share = k == 1 ? 1.0 : cfg.intra_fraction;
  double p_in = intra_slots > 0.0 ? intra_share * cfg.avg_degree / intra_slots : 0.0;
  double p_out = inter_slots > 0.0 ? (1.0 - intra_share) * cfg.avg_degree / inter_slots : 0.0;
  if (p_in > 1.0 || p_out > 1.0 || (intra_slots <= 0.0 && inter_slots <= 0.0 && cfg.avg_degree > 0.0)) {
    throw ConfigError("generate_synthetic: infeasible degree " + std::to_string(cfg.avg_degree) + " for " +
                      std::to_string(n) + " nodes in " + std::to_string(k) + " communities");
  }
  return generate_planted(n, cfg.feature_dim, k, p_in, p_out, cfg.seed, cfg.center_scale, cfg.feature_noise);
}

void InjectionConfig::validate(std::size_t num_nodes) const {
  if (clique_size < 2) throw ConfigError("inject: clique_size must be >= 2");
  if (n_structural == 1) throw ConfigError("inject: a clique needs at least 2 structural nodes");
  if (n_structural + n_contextual > num_nodes) throw ConfigError("inject: more anomalies than nodes");
  if (n_contextual > 0 && (swap_candidates < 1 || num_nodes < 2)) {
    throw ConfigError("inject: contextual anomalies need swap_candidates >= 1 and at least 2 nodes");
  }
}

InjectionResult inject_anomalies(const AttributedGraph& g, const InjectionConfig& ic) {
  const std::size_t n = g.num_nodes();
  ic.validate(n);
  Rng rng(derive_seed(ic.seed, SeedStream::kInjection));

  std::vector<NodeId> pool(n);
  std::iota(pool.begin(), pool.end(), NodeId{0});
  rng.shuffle(std::span<NodeId>(pool));

  InjectionResult out;
  std::vector<int> labels = g.labels().value_or(std::vector<int>(n, 0));
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());

  if (ic.n_structural > 0) {
    const std::size_t n_cliques = std::max<std::size_t>(1, ic.n_structural / ic.clique_size);
    out.cliques.resize(n_cliques);
    for (std::size_t i = 0; i < ic.n_structural; ++i) {
      out.cliques[std::min(i / ic.clique_size, n_cliques - 1)].push_back(pool[i]);
    }
    for (auto& clique : out.cliques) {
      std::sort(clique.begin(), clique.end());
      for (std::size_t a = 0; a < clique.size(); ++a) {
        labels[clique[a]] = 1;
        for (std::size_t b = a + 1; b < clique.size(); ++b) edges.emplace_back(clique[a], clique[b]);
      }
    }
  }

  const Matrix& original = g.features();
  Matrix x = original;
  for (std::size_t i = 0; i < ic.n_contextual; ++i) {
    const NodeId v = pool[ic.n_structural + i];
    double best_dist = -1.0;
    NodeId best = v;
    for (std::size_t c = 0; c < ic.swap_candidates; ++c) {
      NodeId cand;
      do {
        cand = static_cast<NodeId>(rng.below(n));
      } while (cand == v);
      double dist = 0.0;
      const auto a = original.row(v), b = original.row(cand);
      for (std::size_t j = 0; j < a.size(); ++j) dist += (a[j] - b[j]) * (a[j] - b[j]);
      if (dist > best_dist) {
        best_dist = dist;
        best = cand;
      }
    }
    const auto src = original.row(best);
    std::copy(src.begin(), src.end(), x.row(v).begin());
    labels[v] = 1;
    out.contextual.push_back(v);
  }
  std::sort(out.contextual.begin(), out.contextual.end());
  out.graph = AttributedGraph(n, std::move(edges), std::move(x), std::move(labels));
  return out;
}

}  // namespace commgad
