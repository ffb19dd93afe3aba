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

#include "commgad/optimizer.hpp"

#include <cmath>
#include <string>

#include "commgad/error.hpp"

namespace commgad {

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ConfigError("unknown optimizer '" + std::string(name) + "' (adam | sgd)");
}

std::string_view to_string(OptimizerKind kind) { return kind == OptimizerKind::kAdam ? "adam" : "sgd"; }

void Optimizer::step(std::vector<Matrix*> params, const std::vector<const Matrix*>& grads) {
  if (params.size() != grads.size()) throw ShapeError("optimizer: parameter/gradient count mismatch");
  ++t_;
  if (cfg_.kind == OptimizerKind::kAdam && m_.empty()) {
    for (const Matrix* p : params) {
      m_.emplace_back(p->size(), 0.0);
      v_.emplace_back(p->size(), 0.0);
    }
  }
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i]->data();
    const auto& g = grads[i]->data();
    if (p.size() != g.size()) throw ShapeError("optimizer: gradient shape mismatch for parameter " + std::to_string(i));
    for (std::size_t j = 0; j < p.size(); ++j) {
      const double gj = g[j] + cfg_.weight_decay * p[j];
      if (cfg_.kind == OptimizerKind::kSgd) {
        p[j] -= cfg_.learning_rate * gj;
        continue;
      }
      double& m = m_[i][j];
      double& v = v_[i][j];
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * gj;
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * gj * gj;
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      p[j] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
    }
  }
}

}  // namespace commgad
