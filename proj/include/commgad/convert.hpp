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
#include <filesystem>
#include <optional>

#include "commgad/graph.hpp"

namespace commgad {

struct ConvertStats {
  std::size_t edges_read = 0;
  std::size_t edges_skipped = 0;  // referencing ids absent from the node list
  EdgeCleanup cleanup;
};

// LINQS citation dump (cora.content / cora.cites): content lines are
// "<paper_id> <f_1> ... <f_M> <class>", cites lines "<cited> <citing>".
// Nodes are numbered in content-file order; class labels are dropped (they
// are not anomaly labels).
AttributedGraph convert_linqs(const std::filesystem::path& content, const std::filesystem::path& cites,
                              ConvertStats* stats = nullptr);

// Benchmark tensors exported as CSV: `edge_index` as either 2 rows × E
// columns or E rows × 2 columns, `x` as N×M, optional `y` with one integer
// per line (any non-zero value marks an anomaly).
AttributedGraph convert_pyg_csv(const std::filesystem::path& edge_index, const std::filesystem::path& x,
                                const std::optional<std::filesystem::path>& y = std::nullopt,
                                ConvertStats* stats = nullptr);

}  // namespace commgad
