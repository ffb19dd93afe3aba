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

#include "commgad/train.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "commgad/checkpoint.hpp"
#include "commgad/error.hpp"

namespace commgad {
namespace {

std::string parameter_norms(const ModelParams& p) {
  std::ostringstream out;
  const auto names = p.names();
  const auto mats = p.tensors();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    out << (i ? ", " : "") << names[i] << "=" << frobenius_norm(*mats[i]);
  }
  return out.str();
}

}  // namespace

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (!(optimizer.learning_rate >= 0.0) || !std::isfinite(optimizer.learning_rate)) {
    throw ConfigError("learning_rate must be finite and non-negative");
  }
  if (!std::isfinite(optimizer.weight_decay) || optimizer.weight_decay < 0.0) {
    throw ConfigError("weight_decay must be finite and >= 0");
  }
}

TrainResult train(const AttributedGraph& g, ModelConfig cfg, const TrainConfig& tcfg, const EpochCallback& on_epoch) {
  return train_with_communities(g, detect_communities(g, tcfg.community, tcfg.seed), cfg, tcfg, on_epoch);
}

TrainResult train_with_communities(const AttributedGraph& g, const CommunityAssignment& communities,
                                   ModelConfig cfg, const TrainConfig& tcfg, const EpochCallback& on_epoch) {
  tcfg.validate();
  cfg.seed = tcfg.seed;
  cfg.validate();
  if (g.num_edges() == 0) throw Error("train: graph has no edges");

  const ModelInputs inputs = prepare_inputs(g, communities);
  TrainResult result;
  result.communities = communities;
  result.params = ModelParams::glorot(g.feature_dim(), cfg);
  Optimizer opt(tcfg.optimizer);

  using Clock = std::chrono::steady_clock;
  for (std::size_t epoch = 1; epoch <= tcfg.epochs; ++epoch) {
    const auto start = Clock::now();
    LossAndGrad lg;
    try {
      lg = loss_and_gradient(inputs, cfg, result.params);
    } catch (const NumericalError& e) {
      throw NumericalError("epoch " + std::to_string(epoch) + ": " + e.what() +
                           "; parameter norms: " + parameter_norms(result.params));
    }
    if (!lg.grad.all_finite()) {
      throw NumericalError("epoch " + std::to_string(epoch) + ": non-finite gradient; parameter norms: " +
                           parameter_norms(result.params));
    }
    opt.step(result.params, lg.grad);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.total_loss = lg.output.total_loss;
    for (double v : lg.output.feature_loss) rec.feature_loss += v;
    for (double v : lg.output.h_loss) rec.h_loss += v;
    rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.history.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }

  try {
    result.final_output = forward(inputs, cfg, result.params);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("after training: ") + e.what() + "; parameter norms: " +
                         parameter_norms(result.params));
  }
  if (tcfg.checkpoint_path) save_checkpoint(*tcfg.checkpoint_path, cfg, result.params);
  return result;
}

void write_epoch_jsonl(std::ostream& out, const EpochRecord& r) {
  const nlohmann::json line{{"epoch", r.epoch},
                            {"total_loss", r.total_loss},
                            {"feat_loss", r.feature_loss},
                            {"h_loss", r.h_loss},
                            {"seconds", r.seconds}};
  out << line.dump() << '\n';
}

}  // namespace commgad
