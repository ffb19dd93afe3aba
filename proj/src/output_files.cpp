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

#include "commgad/output_files.hpp"

#include "commgad/error.hpp"

namespace commgad {

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

OutputSet::~OutputSet() {
  if (committed_) return;
  for (auto& e : entries_) {
    e.stream.reset();
    std::error_code ec;
    std::filesystem::remove(e.partial_path, ec);
  }
}

std::ofstream& OutputSet::open(const std::string& name) {
  Entry e;
  e.final_path = dir_ / name;
  e.partial_path = dir_ / (name + ".partial");
  e.stream = std::make_unique<std::ofstream>(e.partial_path, std::ios::binary | std::ios::trunc);
  if (!*e.stream) throw Error("cannot write " + e.partial_path.string());
  entries_.push_back(std::move(e));
  return *entries_.back().stream;
}

void OutputSet::write(const std::string& name, std::string_view content) {
  auto& out = open(name);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<std::filesystem::path> OutputSet::commit() {
  std::vector<std::filesystem::path> paths;
  for (auto& e : entries_) {
    e.stream->flush();
    if (!*e.stream) throw Error("write failed: " + e.partial_path.string());
    e.stream.reset();
  }
  for (auto& e : entries_) {
    std::filesystem::rename(e.partial_path, e.final_path);
    paths.push_back(e.final_path);
  }
  committed_ = true;
  return paths;
}

}  // namespace commgad
