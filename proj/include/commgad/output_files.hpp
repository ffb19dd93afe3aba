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
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace commgad {

// Group of output files that appear together or not at all. Files are
// written to "<name>.partial" and renamed on commit(); if the set is
// destroyed without commit() every partial file is removed.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);
  OutputSet(const OutputSet&) = delete;
  OutputSet& operator=(const OutputSet&) = delete;
  ~OutputSet();

  std::ofstream& open(const std::string& name);
  void write(const std::string& name, std::string_view content);
  // Returns the final paths.
  std::vector<std::filesystem::path> commit();

  const std::filesystem::path& dir() const { return dir_; }

 private:
  struct Entry {
    std::filesystem::path final_path;
    std::filesystem::path partial_path;
    std::unique_ptr<std::ofstream> stream;
  };
  std::filesystem::path dir_;
  std::vector<Entry> entries_;
  bool committed_ = false;
};

}  // namespace commgad
