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

#include "commgad/convert.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "commgad/error.hpp"
#include "commgad/graph_io.hpp"

namespace commgad {
namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

double to_double(const std::string& tok, const std::filesystem::path& path, std::size_t lineno) {
  double v;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(path.string(), lineno, "not a number: '" + tok + "'");
  }
  return v;
}

}  // namespace

AttributedGraph convert_linqs(const std::filesystem::path& content, const std::filesystem::path& cites,
                              ConvertStats* stats) {
  std::ifstream in(content);
  if (!in) throw Error("cannot open " + content.string());
  std::unordered_map<std::string, NodeId> ids;
  std::vector<double> data;
  std::size_t m = 0, lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() < 3) throw ParseError(content.string(), lineno, "expected id, features and class");
    const std::size_t width = toks.size() - 2;
    if (m == 0) m = width;
    if (width != m) throw ParseError(content.string(), lineno, "inconsistent feature count");
    if (!ids.emplace(toks.front(), static_cast<NodeId>(ids.size())).second) {
      throw ParseError(content.string(), lineno, "duplicate node id '" + toks.front() + "'");
    }
    for (std::size_t j = 1; j + 1 < toks.size(); ++j) data.push_back(to_double(toks[j], content, lineno));
  }
  const std::size_t n = ids.size();
  if (n == 0) throw ParseError(content.string(), 0, "no nodes");

  ConvertStats st;
  std::vector<Edge> edges;
  std::ifstream ce(cites);
  if (!ce) throw Error("cannot open " + cites.string());
  lineno = 0;
  for (std::string line; std::getline(ce, line);) {
    ++lineno;
    const auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw ParseError(cites.string(), lineno, "expected two paper ids");
    ++st.edges_read;
    const auto a = ids.find(toks[0]), b = ids.find(toks[1]);
    if (a == ids.end() || b == ids.end()) {
      ++st.edges_skipped;
      continue;
    }
    edges.emplace_back(a->second, b->second);
  }
  AttributedGraph g(n, std::move(edges), Matrix(n, m, std::move(data)), std::nullopt, &st.cleanup);
  if (stats) *stats = st;
  return g;
}

AttributedGraph convert_pyg_csv(const std::filesystem::path& edge_index, const std::filesystem::path& x,
                                const std::optional<std::filesystem::path>& y, ConvertStats* stats) {
  Matrix features = read_features(x);
  const std::size_t n = features.rows();
  const Matrix ei = read_features(edge_index);
  ConvertStats st;
  std::vector<Edge> edges;
  auto add = [&](double a, double b) {
    if (a < 0 || b < 0 || a != std::floor(a) || b != std::floor(b)) {
      throw ParseError(edge_index.string(), 0, "edge endpoints must be non-negative integers");
    }
    if (a >= static_cast<double>(n) || b >= static_cast<double>(n)) {
      throw BoundsError(edge_index.string() + ": edge endpoint >= N = " + std::to_string(n));
    }
    ++st.edges_read;
    edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
  };
  if (ei.rows() == 2 && ei.cols() != 2) {
    for (std::size_t e = 0; e < ei.cols(); ++e) add(ei(0, e), ei(1, e));
  } else if (ei.cols() == 2) {
    for (std::size_t e = 0; e < ei.rows(); ++e) add(ei(e, 0), ei(e, 1));
  } else {
    throw ParseError(edge_index.string(), 0, "edge_index must be 2×E or E×2, got " + ei.shape_string());
  }
  std::optional<std::vector<int>> labels;
  if (y) {
    const Matrix raw = read_features(*y);
    if (raw.cols() != 1 || raw.rows() != n) {
      throw ShapeError(y->string() + ": expected " + std::to_string(n) + " labels, got " + raw.shape_string());
    }
    labels.emplace(n);
    for (std::size_t i = 0; i < n; ++i) (*labels)[i] = raw(i, 0) != 0.0 ? 1 : 0;
  }
  AttributedGraph g(n, std::move(edges), std::move(features), std::move(labels), &st.cleanup);
  if (stats) *stats = st;
  return g;
}

}  // namespace commgad
