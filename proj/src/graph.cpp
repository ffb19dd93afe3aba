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

#include "commgad/graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "commgad/error.hpp"

namespace commgad {

AttributedGraph::AttributedGraph(std::size_t num_nodes, std::vector<Edge> edges, Matrix features,
                                 std::optional<std::vector<int>> labels, EdgeCleanup* cleanup)
    : num_nodes_(num_nodes), features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.rows() != num_nodes_) {
    throw ShapeError("feature matrix has " + std::to_string(features_.rows()) +
                     " rows, graph has " + std::to_string(num_nodes_) + " nodes");
  }
  if (features_.cols() < 1) throw ShapeError("feature matrix needs at least one column");
  if (labels_) {
    if (labels_->size() != num_nodes_) {
      throw ShapeError("label vector has length " + std::to_string(labels_->size()) +
                       ", expected " + std::to_string(num_nodes_));
    }
    for (int l : *labels_) {
      if (l != 0 && l != 1) throw ShapeError("labels must be 0 or 1, got " + std::to_string(l));
    }
  }

  EdgeCleanup stats;
  stats.raw_entries = edges.size();
  std::vector<Edge> clean;
  clean.reserve(edges.size());
  for (auto [u, v] : edges) {
    if (u >= num_nodes_ || v >= num_nodes_) {
      throw BoundsError("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                        ") out of range for " + std::to_string(num_nodes_) + " nodes");
    }
    if (u == v) {
      ++stats.self_loops_dropped;
      continue;
    }
    clean.emplace_back(std::min(u, v), std::max(u, v));
  }
  std::sort(clean.begin(), clean.end());
  const auto last = std::unique(clean.begin(), clean.end());
  stats.duplicates_collapsed = static_cast<std::size_t>(clean.end() - last);
  clean.erase(last, clean.end());
  edges_ = std::move(clean);
  if (cleanup) *cleanup = stats;
  build_index();
}

void AttributedGraph::build_index() {
  offsets_.assign(num_nodes_ + 1, 0);
  for (auto [u, v] : edges_) {
    ++offsets_[u + 1];
    ++offsets_[v + 1];
  }
  for (std::size_t i = 0; i < num_nodes_; ++i) offsets_[i + 1] += offsets_[i];
  adj_.assign(offsets_.back(), 0);
  std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
  for (auto [u, v] : edges_) {
    adj_[cursor[u]++] = v;
    adj_[cursor[v]++] = u;
  }
  for (std::size_t i = 0; i < num_nodes_; ++i) {
    std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
  }
}

AttributedGraph AttributedGraph::with_features(Matrix features) const {
  AttributedGraph g = *this;
  if (features.rows() != num_nodes_ || features.cols() < 1) {
    throw ShapeError("replacement features have shape " + features.shape_string());
  }
  g.features_ = std::move(features);
  return g;
}

AttributedGraph AttributedGraph::with_labels(std::optional<std::vector<int>> labels) const {
  return AttributedGraph(num_nodes_, edges_, features_, std::move(labels));
}

Matrix SparseAdjacency::to_dense() const {
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = row_offsets[i]; p < row_offsets[i + 1]; ++p) d(i, col_indices[p]) = values[p];
  return d;
}

SparseAdjacency sparse_identity(std::size_t n) {
  SparseAdjacency s;
  s.n = n;
  s.row_offsets.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) s.row_offsets[i] = i;
  s.col_indices.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.col_indices[i] = static_cast<NodeId>(i);
  s.values.assign(n, 1.0);
  return s;
}

SparseAdjacency normalized_adjacency(const AttributedGraph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> deg(n);
  for (std::size_t i = 0; i < n; ++i) deg[i] = static_cast<double>(g.degree(static_cast<NodeId>(i)) + 1);
  SparseAdjacency a;
  a.n = n;
  a.row_offsets.assign(n + 1, 0);
  a.col_indices.reserve(n + g.num_directed_entries());
  a.values.reserve(n + g.num_directed_entries());
  for (std::size_t i = 0; i < n; ++i) {
    const auto nbrs = g.neighbors(static_cast<NodeId>(i));
    bool diag_done = false;
    auto put = [&](NodeId j) {
      a.col_indices.push_back(j);
      a.values.push_back(1.0 / std::sqrt(deg[i] * deg[j]));  // one rounding per entry
    };
    for (NodeId j : nbrs) {
      if (!diag_done && j > i) {
        put(static_cast<NodeId>(i));
        diag_done = true;
      }
      put(j);
    }
    if (!diag_done) put(static_cast<NodeId>(i));
    a.row_offsets[i + 1] = a.col_indices.size();
  }
  return a;
}

double homophily_ratio(const AttributedGraph& g) {
  if (g.num_edges() == 0) throw UndefinedMetricError("homophily is undefined on a graph with no edges");
  const Matrix& x = g.features();
  std::vector<double> norms(g.num_nodes());
  for (std::size_t i = 0; i < g.num_nodes(); ++i) {
    double s = 0.0;
    for (double v : x.row(i)) s += v * v;
    norms[i] = std::sqrt(s);
  }
  double total = 0.0;
  for (auto [u, v] : g.edges()) {
    if (norms[u] == 0.0 || norms[v] == 0.0) continue;
    double dot = 0.0;
    const auto xu = x.row(u), xv = x.row(v);
    for (std::size_t k = 0; k < xu.size(); ++k) dot += xu[k] * xv[k];
    total += std::clamp(dot / (norms[u] * norms[v]), -1.0, 1.0);
  }
  return total / static_cast<double>(g.num_edges());
}

}  // namespace commgad
