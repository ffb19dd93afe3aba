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

#include "commgad/model.hpp"

namespace commgad {

// Layout: "FGCK" magic, u64 LE header length, UTF-8 JSON header
// {"format_version", "config", "tensors": [{"name", "rows", "cols"}...]},
// then every tensor as row-major little-endian f64 in ModelParams order.
void save_checkpoint(const std::filesystem::path& path, const ModelConfig& cfg, const ModelParams& params);

struct Checkpoint {
  ModelConfig config;
  ModelParams params;
};

// Throws ParseError on a bad magic, truncated data or mismatched shapes.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace commgad
