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

#include "commgad/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <fstream>

#include "json.hpp"

#include "commgad/error.hpp"

namespace commgad {
namespace {

constexpr std::array<char, 4> kMagic{'F', 'G', 'C', 'K'};
constexpr int kFormatVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<unsigned char, 8> b{};
  for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b.data()), 8);
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& cfg, const ModelParams& params) {
  nlohmann::json header;
  header["format_version"] = kFormatVersion;
  header["config"] = {{"hidden_dim", cfg.hidden_dim}, {"gcn_layers", cfg.gcn_layers},
                      {"lambda_x", cfg.lambda_x},     {"lambda_n", cfg.lambda_n},
                      {"sigma_floor", cfg.sigma_floor}, {"seed", cfg.seed}};
  header["feature_dim"] = params.xi.w.rows();
  const auto names = params.names();
  const auto mats = params.tensors();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    header["tensors"].push_back({{"name", names[i]}, {"rows", mats[i]->rows()}, {"cols", mats[i]->cols()}});
  }
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write checkpoint " + path.string());
  out.write(kMagic.data(), 4);
  put_u64(out, text.size());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Matrix* m : mats) {
    for (double v : m->data()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw Error("write failed: " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || magic != kMagic) throw ParseError(path.string(), 0, "not a checkpoint (bad magic)");
  const std::uint64_t len = get_u64(in);
  if (!in || len > (1u << 26)) throw ParseError(path.string(), 0, "bad header length");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw ParseError(path.string(), 0, "truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, std::string("bad header: ") + e.what());
  }
  Checkpoint ck;
  try {
    if (header.at("format_version").get<int>() != kFormatVersion) {
      throw ParseError(path.string(), 0, "unsupported format_version");
    }
    const auto& c = header.at("config");
    ck.config.hidden_dim = c.at("hidden_dim").get<std::size_t>();
    ck.config.gcn_layers = c.at("gcn_layers").get<std::size_t>();
    ck.config.lambda_x = c.at("lambda_x").get<double>();
    ck.config.lambda_n = c.at("lambda_n").get<double>();
    ck.config.sigma_floor = c.at("sigma_floor").get<double>();
    ck.config.seed = c.at("seed").get<std::uint64_t>();
    ck.params = ModelParams::zeros(header.at("feature_dim").get<std::size_t>(), ck.config);
    const auto names = ck.params.names();
    const auto mats = ck.params.tensors();
    const auto& listed = header.at("tensors");
    if (listed.size() != mats.size()) throw ParseError(path.string(), 0, "tensor count mismatch");
    for (std::size_t i = 0; i < mats.size(); ++i) {
      if (listed[i].at("name").get<std::string>() != names[i] ||
          listed[i].at("rows").get<std::size_t>() != mats[i]->rows() ||
          listed[i].at("cols").get<std::size_t>() != mats[i]->cols()) {
        throw ParseError(path.string(), 0, "tensor " + std::to_string(i) + " does not match " + names[i]);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string(), 0, std::string("bad header: ") + e.what());
  } catch (const ConfigError& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  for (Matrix* m : ck.params.tensors()) {
    for (double& v : m->data()) v = std::bit_cast<double>(get_u64(in));
  }
  if (!in) throw ParseError(path.string(), 0, "truncated parameter data");
  return ck;
}

}  // namespace commgad
