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

#include "commgad/community.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "commgad/error.hpp"
#include "commgad/random.hpp"

namespace commgad {
namespace {

// Weighted graph used between Louvain levels. `loops[i]` is the A_ii entry
// of the aggregated adjacency (internal weight of the merged community,
// both directions counted).
struct WeightedGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
  std::vector<double> loops;
  std::vector<double> degree;  // k_i = Σ_j A_ij including the loop
  double total = 0.0;          // 2m

  std::size_t size() const { return adj.size(); }
};

WeightedGraph from_graph(const AttributedGraph& g) {
  WeightedGraph w;
  const std::size_t n = g.num_nodes();
  w.adj.resize(n);
  w.loops.assign(n, 0.0);
  w.degree.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (NodeId j : g.neighbors(static_cast<NodeId>(i))) w.adj[i].emplace_back(j, 1.0);
    w.degree[i] = static_cast<double>(g.degree(static_cast<NodeId>(i)));
    w.total += w.degree[i];
  }
  return w;
}

WeightedGraph aggregate(const WeightedGraph& w, const std::vector<std::uint32_t>& comm, std::size_t k) {
  WeightedGraph out;
  out.adj.resize(k);
  out.loops.assign(k, 0.0);
  out.degree.assign(k, 0.0);
  out.total = w.total;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> raw(k);
  for (std::size_t i = 0; i < w.size(); ++i) {
    const auto ci = comm[i];
    out.loops[ci] += w.loops[i];
    out.degree[ci] += w.degree[i];
    for (auto [j, wt] : w.adj[i]) {
      const auto cj = comm[j];
      if (ci == cj) {
        out.loops[ci] += wt;
      } else {
        raw[ci].emplace_back(cj, wt);
      }
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    auto& r = raw[c];
    std::sort(r.begin(), r.end());
    for (const auto& e : r) {
      if (!out.adj[c].empty() && out.adj[c].back().first == e.first) {
        out.adj[c].back().second += e.second;
      } else {
        out.adj[c].push_back(e);
      }
    }
  }
  return out;
}

// One round of local moving. Returns true if any node moved. `comm` is
// updated in place; ids stay in [0, n).
bool local_moving(const WeightedGraph& w, std::vector<std::uint32_t>& comm, Rng& rng, double resolution) {
  const std::size_t n = w.size();
  if (w.total <= 0.0) return false;
  std::vector<double> tot(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) tot[comm[i]] += w.degree[i];

  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  rng.shuffle(std::span<std::uint32_t>(order));

  std::vector<double> link(n, 0.0);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  bool moved = true;
  constexpr double kMinGain = 1e-12;
  while (moved) {
    moved = false;
    for (std::uint32_t i : order) {
      const std::uint32_t own = comm[i];
      const double ki = w.degree[i];
      touched.clear();
      for (auto [j, wt] : w.adj[i]) {
        const auto cj = comm[j];
        if (link[cj] == 0.0 && std::find(touched.begin(), touched.end(), cj) == touched.end()) {
          touched.push_back(cj);
        }
        link[cj] += wt;
      }
      tot[own] -= ki;
      const double scale = resolution * ki / w.total;
      const double stay_gain = link[own] - tot[own] * scale;
      std::uint32_t best = own;
      double best_gain = stay_gain;
      std::sort(touched.begin(), touched.end());
      for (auto c : touched) {
        if (c == own) continue;
        const double gain = link[c] - tot[c] * scale;
        if (gain > best_gain + kMinGain || (best != own && gain == best_gain && c < best)) {
          best = c;
          best_gain = gain;
        }
      }
      tot[best] += ki;
      if (best != own) {
        comm[i] = best;
        moved = true;
        any_move = true;
      }
      for (auto c : touched) link[c] = 0.0;
      link[own] = 0.0;
    }
  }
  return any_move;
}

}  // namespace

CommunityAssignment compact(const std::vector<std::uint32_t>& raw) {
  CommunityAssignment a;
  a.labels.resize(raw.size());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    auto [it, inserted] = remap.try_emplace(raw[i], static_cast<std::uint32_t>(remap.size()));
    a.labels[i] = it->second;
  }
  a.num_communities = remap.size();
  return a;
}

CommunityAssignment singleton_partition(std::size_t n) {
  CommunityAssignment a;
  a.labels.resize(n);
  std::iota(a.labels.begin(), a.labels.end(), 0u);
  a.num_communities = n;
  return a;
}

CommunityAlgorithm parse_community_algorithm(std::string_view name) {
  if (name == "louvain") return CommunityAlgorithm::kLouvain;
  if (name == "labelprop" || name == "label_propagation") return CommunityAlgorithm::kLabelPropagation;
  throw ConfigError("unknown community algorithm '" + std::string(name) + "' (louvain | labelprop)");
}

std::string_view to_string(CommunityAlgorithm algo) {
  return algo == CommunityAlgorithm::kLouvain ? "louvain" : "labelprop";
}

CommunityAssignment louvain(const AttributedGraph& g, std::uint64_t seed, const LouvainOptions& options) {
  const std::size_t n = g.num_nodes();
  Rng rng(derive_seed(seed, SeedStream::kCommunity));
  std::vector<std::uint32_t> membership(n);
  std::iota(membership.begin(), membership.end(), 0u);
  auto report = [&](std::size_t pass) {
    if (options.on_pass && g.num_edges() > 0) options.on_pass(pass, modularity(g, compact(membership)));
  };
  report(0);

  WeightedGraph w = from_graph(g);
  for (std::size_t pass = 1;; ++pass) {
    std::vector<std::uint32_t> comm(w.size());
    std::iota(comm.begin(), comm.end(), 0u);
    if (!local_moving(w, comm, rng, options.resolution)) break;
    const CommunityAssignment level = compact(comm);
    for (auto& m : membership) m = level.labels[m];
    report(pass);
    w = aggregate(w, level.labels, level.num_communities);
  }
  return compact(membership);
}

CommunityAssignment label_propagation(const AttributedGraph& g, std::uint64_t seed) {
  const std::size_t n = g.num_nodes();
  Rng rng(derive_seed(seed, SeedStream::kCommunity));
  std::vector<std::uint32_t> label(n);
  std::iota(label.begin(), label.end(), 0u);
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint32_t> count(n, 0);
  std::vector<std::uint32_t> seen;

  for (std::size_t sweep = 0; sweep < kLabelPropagationMaxSweeps; ++sweep) {
    rng.shuffle(std::span<std::uint32_t>(order));
    bool changed = false;
    for (std::uint32_t v : order) {
      const auto nbrs = g.neighbors(v);
      if (nbrs.empty()) continue;
      seen.clear();
      for (NodeId u : nbrs) {
        if (count[label[u]]++ == 0) seen.push_back(label[u]);
      }
      std::uint32_t best = seen.front();
      for (auto l : seen) {
        if (count[l] > count[best] || (count[l] == count[best] && l < best)) best = l;
      }
      for (auto l : seen) count[l] = 0;
      if (best != label[v]) {
        label[v] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }
  return compact(label);
}

CommunityAssignment detect_communities(const AttributedGraph& g, CommunityAlgorithm algo, std::uint64_t seed) {
  return algo == CommunityAlgorithm::kLouvain ? louvain(g, seed) : label_propagation(g, seed);
}

double modularity(const AttributedGraph& g, const CommunityAssignment& a) {
  if (g.num_edges() == 0) throw UndefinedMetricError("modularity is undefined on a graph with no edges");
  if (a.labels.size() != g.num_nodes()) throw ShapeError("assignment length does not match node count");
  const double two_m = static_cast<double>(g.num_directed_entries());
  std::vector<double> internal(a.num_communities, 0.0), tot(a.num_communities, 0.0);
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    tot[a.labels[v]] += static_cast<double>(g.degree(static_cast<NodeId>(v)));
  }
  for (auto [u, v] : g.edges()) {
    if (a.labels[u] == a.labels[v]) internal[a.labels[u]] += 2.0;
  }
  double q = 0.0;
  for (std::size_t c = 0; c < a.num_communities; ++c) {
    const double frac = tot[c] / two_m;
    q += internal[c] / two_m - frac * frac;
  }
  return q;
}

Matrix community_average_features(const Matrix& features, const CommunityAssignment& a) {
  if (a.labels.size() != features.rows()) throw ShapeError("assignment length does not match feature rows");
  const std::size_t m = features.cols();
  Matrix sums(a.num_communities, m);
  std::vector<std::size_t> sizes(a.num_communities, 0);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto c = a.labels[i];
    ++sizes[c];
    auto dst = sums.row(c);
    const auto src = features.row(i);
    for (std::size_t k = 0; k < m; ++k) dst[k] += src[k];
  }
  for (std::size_t c = 0; c < a.num_communities; ++c) {
    if (sizes[c] == 0) continue;
    const double inv = 1.0 / static_cast<double>(sizes[c]);
    for (double& v : sums.row(c)) v *= inv;
  }
  Matrix out(features.rows(), m);
  for (std::size_t i = 0; i < features.rows(); ++i) {
    const auto src = sums.row(a.labels[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

}  // namespace commgad
