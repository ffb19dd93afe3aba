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
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "commgad/matrix.hpp"

namespace commgad {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

// What normalization did to a raw edge list.
struct EdgeCleanup {
  std::size_t raw_entries = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t duplicates_collapsed = 0;
};

// Undirected, unweighted graph with an N×M feature matrix and optional 0/1
// anomaly labels. Immutable once built.
//
// Edges are stored once each as (u, v) with u < v, sorted. A CSR neighbor
// index is built alongside for traversal.
class AttributedGraph {
 public:
  AttributedGraph() = default;

  // Symmetrizes, drops self-loops and collapses duplicates. Throws
  // BoundsError on endpoints >= num_nodes and ShapeError on feature/label
  // shape problems.
  AttributedGraph(std::size_t num_nodes, std::vector<Edge> edges, Matrix features,
                  std::optional<std::vector<int>> labels = std::nullopt,
                  EdgeCleanup* cleanup = nullptr);

  std::size_t num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  // Entries of the symmetric adjacency matrix (2 per undirected edge).
  std::size_t num_directed_entries() const { return 2 * edges_.size(); }
  std::size_t feature_dim() const { return features_.cols(); }

  std::span<const Edge> edges() const { return edges_; }
  const Matrix& features() const { return features_; }
  const std::optional<std::vector<int>>& labels() const { return labels_; }
  bool has_labels() const { return labels_.has_value(); }

  std::span<const NodeId> neighbors(NodeId v) const {
    return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }

  // Same topology, different attributes/labels.
  AttributedGraph with_features(Matrix features) const;
  AttributedGraph with_labels(std::optional<std::vector<int>> labels) const;

  friend bool operator==(const AttributedGraph& a, const AttributedGraph& b) {
    return a.num_nodes_ == b.num_nodes_ && a.edges_ == b.edges_ && a.features_ == b.features_ &&
           a.labels_ == b.labels_;
  }

 private:
  void build_index();

  std::size_t num_nodes_ = 0;
  std::vector<Edge> edges_;
  Matrix features_;
  std::optional<std::vector<int>> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<NodeId> adj_;
};

// Compressed sparse row matrix; column indices strictly increasing per row.
struct SparseAdjacency {
  std::size_t n = 0;
  std::vector<std::size_t> row_offsets{0};
  std::vector<NodeId> col_indices;
  std::vector<double> values;

  std::size_t nnz() const { return values.size(); }
  Matrix to_dense() const;
};

SparseAdjacency sparse_identity(std::size_t n);

// D̃^(−1/2) (A + I) D̃^(−1/2). Isolated nodes get a diagonal entry of 1.
SparseAdjacency normalized_adjacency(const AttributedGraph& g);

// Mean over edges of the cosine similarity between endpoint feature vectors.
// Edges touching an all-zero feature row count with cosine 0. Throws
// UndefinedMetricError when the graph has no edges.
double homophily_ratio(const AttributedGraph& g);

}  // namespace commgad
