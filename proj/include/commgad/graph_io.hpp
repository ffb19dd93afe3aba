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

#include <filesystem>
#include <optional>
#include <vector>

#include "commgad/graph.hpp"
#include "commgad/matrix.hpp"

namespace commgad {

// Text edge list: one "u v" pair per line (0-based); '#' starts a comment.
std::vector<Edge> read_edge_list(const std::filesystem::path& path);

// CSV (no header) or binary "FGFM" + u64 N + u64 M + N·M little-endian f64.
// The format is picked by the leading magic bytes.
Matrix read_features(const std::filesystem::path& path);

std::vector<int> read_labels(const std::filesystem::path& path);

// N is the number of feature rows. Edge endpoints must be < N; the label
// file, when given, must have N lines. `cleanup` receives the self-loop and
// duplicate counts.
AttributedGraph load_graph(const std::filesystem::path& edge_path,
                           const std::filesystem::path& feature_path,
                           const std::optional<std::filesystem::path>& label_path = std::nullopt,
                           EdgeCleanup* cleanup = nullptr);

void write_edge_list(const std::filesystem::path& path, const AttributedGraph& g);
// Shortest round-trip decimal representation; reading back is bit-exact.
void write_features_csv(const std::filesystem::path& path, const Matrix& x);
void write_features_binary(const std::filesystem::path& path, const Matrix& x);
void write_labels(const std::filesystem::path& path, const std::vector<int>& labels);

struct GraphFiles {
  std::filesystem::path edges;
  std::filesystem::path features;
  std::optional<std::filesystem::path> labels;
};

// Writes edges.txt, features.csv (or features.bin) and labels.txt if present.
GraphFiles save_graph(const std::filesystem::path& dir, const AttributedGraph& g,
                      bool binary_features = false);

}  // namespace commgad
