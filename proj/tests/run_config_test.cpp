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

#include "commgad/run_config.hpp"

#include <gtest/gtest.h>

#include "commgad/error.hpp"
#include "test_util.hpp"

namespace commgad {
namespace {

using testing::TempDir;
using testing::write_text;

TEST(RunConfig, ParsesAllKeys) {
  const auto rc = parse_run_config(R"({
    "edges": "e.txt", "features": "f.csv", "labels": "l.txt",
    "community_algorithm": "labelprop",
    "model": {"hidden_dim": 8, "gcn_layers": 3, "lambda_x": 0.7, "lambda_n": 0.1, "sigma_floor": 1e-5},
    "train": {"epochs": 20, "learning_rate": 0.01, "optimizer": "sgd", "weight_decay": 0.001,
              "beta1": 0.8, "beta2": 0.99, "epsilon": 1e-7},
    "seed": 4, "runs": 3, "jobs": 2, "output": "o", "checkpoint": "m.ckpt",
    "grid": {"lambda_x": [0.7, 1.0], "lambda_n": [0.1], "hidden_dim": [8, 16]}
  })",
                                   "/base");
  EXPECT_EQ(rc.edges, "/base/e.txt");
  EXPECT_EQ(*rc.labels, "/base/l.txt");
  EXPECT_EQ(rc.train.community, CommunityAlgorithm::kLabelPropagation);
  EXPECT_EQ(rc.model.hidden_dim, 8u);
  EXPECT_EQ(rc.model.gcn_layers, 3u);
  EXPECT_EQ(rc.model.lambda_x, 0.7);
  EXPECT_EQ(rc.model.sigma_floor, 1e-5);
  EXPECT_EQ(rc.train.epochs, 20u);
  EXPECT_EQ(rc.train.optimizer.kind, OptimizerKind::kSgd);
  EXPECT_EQ(rc.train.optimizer.weight_decay, 0.001);
  EXPECT_EQ(rc.train.seed, 4u);
  EXPECT_EQ(rc.runs, 3u);
  EXPECT_EQ(rc.jobs, 2u);
  EXPECT_EQ(rc.output, "/base/o");
  EXPECT_EQ(*rc.train.checkpoint_path, "/base/m.ckpt");
  ASSERT_TRUE(rc.grid);
  EXPECT_EQ(rc.grid->hidden_dim, (std::vector<std::size_t>{8, 16}));
}

TEST(RunConfig, RejectsUnknownKeysAndBadTypes) {
  EXPECT_THROW(parse_run_config(R"({"edges": "e", "features": "f", "epochz": 3})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"edges": "e", "features": "f", "model": {"depth": 3}})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"edges": "e", "features": "f", "seed": "x"})"), ConfigError);
  EXPECT_THROW(parse_run_config(R"({"features": "f"})").validate(), ConfigError);
  EXPECT_THROW(parse_run_config("{not json"), ConfigError);
}

TEST(RunConfig, ValidateNamesMissingFile) {
  TempDir dir("cfg");
  write_text(dir / "e.txt", "0 1\n");
  write_text(dir / "cfg.json", R"({"edges": "e.txt", "features": "nope.csv"})");
  const auto rc = load_run_config(dir / "cfg.json");
  try {
    rc.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("nope.csv"), std::string::npos);
  }
}

TEST(InjectConfig, SyntheticBlock) {
  const auto ic = parse_inject_config(R"({
    "synthetic": {"num_nodes": 500, "avg_degree": 8, "feature_dim": 16, "num_communities": 4},
    "injection": {"n_structural": 13, "clique_size": 6, "n_contextual": 12, "swap_candidates": 50},
    "seed": 2, "output": "d", "binary_features": true
  })",
                                      "/b");
  ASSERT_TRUE(ic.synthetic);
  EXPECT_EQ(ic.synthetic->num_nodes, 500u);
  EXPECT_EQ(ic.injection.n_structural, 13u);
  EXPECT_EQ(ic.seed, 2u);
  EXPECT_EQ(ic.output, "/b/d");
  EXPECT_TRUE(ic.binary_features);
  EXPECT_NO_THROW(ic.validate());
}

TEST(InjectConfig, NeedsExactlyOneSource) {
  EXPECT_THROW(parse_inject_config(R"({"injection": {}})").validate(), ConfigError);
  EXPECT_THROW(parse_inject_config(R"({"injection": {}, "bogus": 1})"), ConfigError);
}

}  // namespace
}  // namespace commgad
