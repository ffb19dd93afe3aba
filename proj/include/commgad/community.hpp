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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "commgad/graph.hpp"
#include "commgad/matrix.hpp"

namespace commgad {

// Per-node community ids, compacted to [0, num_communities) in order of
// first appearance by node index.
struct CommunityAssignment {
  std::vector<std::uint32_t> labels;
  std::size_t num_communities = 0;

  friend bool operator==(const CommunityAssignment&, const CommunityAssignment&) = default;
};

// Compacts arbitrary ids. Throws ShapeError if `raw` is empty but nodes exist.
CommunityAssignment compact(const std::vector<std::uint32_t>& raw);
CommunityAssignment singleton_partition(std::size_t n);

enum class CommunityAlgorithm { kLouvain, kLabelPropagation };

CommunityAlgorithm parse_community_algorithm(std::string_view name);
std::string_view to_string(CommunityAlgorithm algo);

struct LouvainOptions {
  double resolution = 1.0;
  // Called with (pass index, modularity of the flattened partition on the
  // input graph). Pass 0 is the singleton partition.
  std::function<void(std::size_t, double)> on_pass;
};

// Greedy modularity optimization: seeded local moving followed by
// aggregation, repeated until a pass makes no move. Ties go to the smallest
// candidate community id; a node only leaves its community on a strict gain.
CommunityAssignment louvain(const AttributedGraph& g, std::uint64_t seed,
                            const LouvainOptions& options = {});

inline constexpr std::size_t kLabelPropagationMaxSweeps = 100;

// Asynchronous label propagation in a seeded node order. Each node takes the
// most frequent neighbor label (smallest label on ties); stops when a sweep
// changes nothing or after kLabelPropagationMaxSweeps sweeps.
CommunityAssignment label_propagation(const AttributedGraph& g, std::uint64_t seed);

CommunityAssignment detect_communities(const AttributedGraph& g, CommunityAlgorithm algo,
                                       std::uint64_t seed);

// Newman modularity at resolution 1. Throws UndefinedMetricError when the
// graph has no edges.
double modularity(const AttributedGraph& g, const CommunityAssignment& a);

// Row i is the mean of the feature rows of i's community.
Matrix community_average_features(const Matrix& features, const CommunityAssignment& a);
inline Matrix community_average_features(const AttributedGraph& g, const CommunityAssignment& a) {
  return community_average_features(g.features(), a);
}

}  // namespace commgad
