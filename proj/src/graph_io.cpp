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

#include "commgad/graph_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <string_view>

#include "commgad/error.hpp"

namespace commgad {
namespace {

constexpr std::array<char, 4> kFeatureMagic{'F', 'G', 'F', 'M'};

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view tok, T& out) {
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc() && ptr == end;
}

std::uint64_t read_u64_le(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

void write_u64_le(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

Matrix read_features_binary(const std::filesystem::path& path) {
  auto in = open_in(path, std::ios::binary);
  in.seekg(4);
  const std::uint64_t n = read_u64_le(in);
  const std::uint64_t m = read_u64_le(in);
  if (!in) throw ParseError(path.string(), 0, "truncated binary feature header");
  if (m == 0 || (n != 0 && m > (std::uint64_t{1} << 40) / n)) {
    throw ParseError(path.string(), 0, "implausible binary feature shape");
  }
  std::vector<double> data(n * m);
  for (auto& v : data) v = std::bit_cast<double>(read_u64_le(in));
  if (!in) throw ParseError(path.string(), 0, "truncated binary feature payload");
  return Matrix(n, m, std::move(data));
}

Matrix read_features_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> data;
  std::size_t rows = 0, cols = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    std::size_t count = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto tok = trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
      double v;
      if (!parse_number(tok, v)) {
        throw ParseError(path.string(), lineno, "not a number: '" + std::string(tok) + "'");
      }
      data.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw ParseError(path.string(), lineno,
                       "expected " + std::to_string(cols) + " columns, got " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0) throw ParseError(path.string(), 0, "empty feature file");
  return Matrix(rows, cols, std::move(data));
}

}  // namespace

std::vector<Edge> read_edge_list(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = trim(body.substr(0, hash));
    if (body.empty()) continue;
    const auto sep = body.find_first_of(" \t");
    if (sep == std::string_view::npos) throw ParseError(path.string(), lineno, "expected two node ids");
    const auto a = trim(body.substr(0, sep));
    const auto b = trim(body.substr(sep));
    std::uint64_t u, v;
    if (!parse_number(a, u) || !parse_number(b, v)) {
      throw ParseError(path.string(), lineno, "expected two non-negative integers, got '" +
                                                  std::string(body) + "'");
    }
    if (u > UINT32_MAX || v > UINT32_MAX) throw ParseError(path.string(), lineno, "node id too large");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

Matrix read_features(const std::filesystem::path& path) {
  std::array<char, 4> head{};
  {
    auto in = open_in(path, std::ios::binary);
    in.read(head.data(), 4);
    if (in.gcount() == 4 && head == kFeatureMagic) return read_features_binary(path);
  }
  return read_features_csv(path);
}

std::vector<int> read_labels(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto body = trim(line);
    if (body.empty()) continue;
    int v;
    if (!parse_number(body, v) || (v != 0 && v != 1)) {
      throw ParseError(path.string(), lineno, "label must be 0 or 1, got '" + std::string(body) + "'");
    }
    labels.push_back(v);
  }
  return labels;
}

AttributedGraph load_graph(const std::filesystem::path& edge_path,
                           const std::filesystem::path& feature_path,
                           const std::optional<std::filesystem::path>& label_path,
                           EdgeCleanup* cleanup) {
  Matrix features = read_features(feature_path);
  const std::size_t n = features.rows();
  auto edges = read_edge_list(edge_path);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i].first >= n || edges[i].second >= n) {
      throw BoundsError(edge_path.string() + ": edge (" + std::to_string(edges[i].first) + ", " +
                        std::to_string(edges[i].second) + ") references a node >= N = " +
                        std::to_string(n));
    }
  }
  std::optional<std::vector<int>> labels;
  if (label_path) {
    labels = read_labels(*label_path);
    if (labels->size() != n) {
      throw ShapeError(label_path->string() + ": " + std::to_string(labels->size()) +
                       " labels for " + std::to_string(n) + " nodes");
    }
  }
  return AttributedGraph(n, std::move(edges), std::move(features), std::move(labels), cleanup);
}

void write_edge_list(const std::filesystem::path& path, const AttributedGraph& g) {
  auto out = open_out(path);
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

void write_features_csv(const std::filesystem::path& path, const Matrix& x) {
  auto out = open_out(path);
  std::array<char, 32> buf{};
  for (std::size_t i = 0; i < x.rows(); ++i) {
    for (std::size_t j = 0; j < x.cols(); ++j) {
      if (j) out.put(',');
      auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x(i, j));
      out.write(buf.data(), ptr - buf.data());
    }
    out.put('\n');
  }
  if (!out) throw Error("write failed: " + path.string());
}

void write_features_binary(const std::filesystem::path& path, const Matrix& x) {
  auto out = open_out(path, std::ios::binary);
  out.write(kFeatureMagic.data(), 4);
  write_u64_le(out, x.rows());
  write_u64_le(out, x.cols());
  for (double v : x.data()) write_u64_le(out, std::bit_cast<std::uint64_t>(v));
  if (!out) throw Error("write failed: " + path.string());
}

void write_labels(const std::filesystem::path& path, const std::vector<int>& labels) {
  auto out = open_out(path);
  for (int l : labels) out << l << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

GraphFiles save_graph(const std::filesystem::path& dir, const AttributedGraph& g, bool binary_features) {
  std::filesystem::create_directories(dir);
  GraphFiles files{dir / "edges.txt", dir / (binary_features ? "features.bin" : "features.csv"), std::nullopt};
  write_edge_list(files.edges, g);
  if (binary_features) {
    write_features_binary(files.features, g.features());
  } else {
    write_features_csv(files.features, g.features());
  }
  if (g.labels()) {
    files.labels = dir / "labels.txt";
    write_labels(*files.labels, *g.labels());
  }
  return files;
}

}  // namespace commgad
