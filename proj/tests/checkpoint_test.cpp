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

#include <gtest/gtest.h>

#include "commgad/error.hpp"
#include "test_util.hpp"

namespace commgad {
namespace {

using testing::TempDir;

TEST(Checkpoint, RoundTripIsExact) {
  TempDir dir("ckpt");
  ModelConfig cfg;
  cfg.hidden_dim = 5;
  cfg.gcn_layers = 3;
  cfg.lambda_x = 0.7;
  cfg.lambda_n = 0.1;
  cfg.seed = 9;
  auto p = ModelParams::glorot(7, cfg);
  p.attr_b(0, 2) = 0.1 + 0.2;
  save_checkpoint(dir / "m.ckpt", cfg, p);
  const auto c = load_checkpoint(dir / "m.ckpt");
  EXPECT_EQ(c.params, p);
  EXPECT_EQ(c.config.hidden_dim, 5u);
  EXPECT_EQ(c.config.gcn_layers, 3u);
  EXPECT_EQ(c.config.lambda_x, 0.7);
  EXPECT_EQ(c.config.lambda_n, 0.1);
}

TEST(Checkpoint, RejectsBadInput) {
  TempDir dir("ckpt");
  testing::write_text(dir / "bad.ckpt", "XXXXgarbage");
  EXPECT_THROW(load_checkpoint(dir / "bad.ckpt"), ParseError);

  ModelConfig cfg;
  save_checkpoint(dir / "m.ckpt", cfg, ModelParams::glorot(3, cfg));
  std::string bytes = testing::read_text(dir / "m.ckpt");
  bytes.resize(bytes.size() - 8);
  testing::write_text(dir / "short.ckpt", bytes);
  EXPECT_THROW(load_checkpoint(dir / "short.ckpt"), ParseError);
  EXPECT_THROW(load_checkpoint(dir / "missing.ckpt"), Error);
}

}  // namespace
}  // namespace commgad
