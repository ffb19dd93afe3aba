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

#include "commgad/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "commgad/error.hpp"

namespace commgad {

AnomalyReport detect(const AttributedGraph& g, const ModelConfig& cfg, const TrainConfig& tcfg,
                     const EpochCallback& on_epoch) {
  const TrainResult tr = train(g, cfg, tcfg, on_epoch);
  AnomalyReport r = score_output(tr.final_output, g.labels());
  r.meta.seed = tcfg.seed;
  r.meta.model = cfg;
  r.meta.model.seed = tcfg.seed;
  r.meta.epochs = tcfg.epochs;
  r.meta.community_algorithm = std::string(to_string(tcfg.community));
  r.meta.num_communities = tr.communities.num_communities;
  for (const auto& e : tr.history.epochs) r.meta.train_seconds += e.seconds;
  r.meta.mean_epoch_seconds = r.meta.train_seconds / static_cast<double>(tr.history.epochs.size());
  return r;
}

ExperimentSummary run_experiment(const AttributedGraph& g, const ModelConfig& cfg, const TrainConfig& tcfg,
                                 std::size_t n_runs, std::size_t jobs) {
  std::vector<std::uint64_t> seeds(n_runs);
  for (std::size_t i = 0; i < n_runs; ++i) seeds[i] = tcfg.seed + i;
  return run_experiment_seeds(g, cfg, tcfg, seeds, jobs);
}

ExperimentSummary run_experiment_seeds(const AttributedGraph& g, const ModelConfig& cfg, const TrainConfig& tcfg,
                                       const std::vector<std::uint64_t>& seeds, std::size_t jobs) {
  if (seeds.empty()) throw ConfigError("run_experiment: need at least one run");
  if (!g.has_labels()) throw ConfigError("run_experiment: graph has no labels");
  const std::size_t n = seeds.size();
  std::vector<AnomalyReport> reports(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        TrainConfig t = tcfg;
        t.seed = seeds[i];
        t.checkpoint_path.reset();
        reports[i] = detect(g, cfg, t);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(jobs, 1, n);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  ExperimentSummary s;
  s.runs = std::move(reports);
  double sum = 0.0;
  s.best_auc = *s.runs.front().auc;
  for (const auto& r : s.runs) {
    sum += *r.auc;
    s.best_auc = std::max(s.best_auc, *r.auc);
  }
  s.mean_auc = sum / static_cast<double>(n);
  double var = 0.0;
  for (const auto& r : s.runs) var += (*r.auc - s.mean_auc) * (*r.auc - s.mean_auc);
  s.std_auc = std::sqrt(var / static_cast<double>(n));
  return s;
}

GridSearchResult grid_search(const AttributedGraph& g, const Grid& grid, const ModelConfig& base,
                             const TrainConfig& tcfg, std::size_t final_runs, std::size_t jobs) {
  if (grid.lambda_x.empty() || grid.lambda_n.empty() || grid.hidden_dim.empty()) {
    throw ConfigError("grid_search: every grid axis needs at least one value");
  }
  if (!g.has_labels()) throw ConfigError("grid_search: graph has no labels");
  GridSearchResult out;
  bool have_best = false;
  double best_auc = 0.0;
  for (double lx : grid.lambda_x) {
    for (double ln : grid.lambda_n) {
      for (std::size_t d : grid.hidden_dim) {
        ModelConfig cfg = base;
        cfg.lambda_x = lx;
        cfg.lambda_n = ln;
        cfg.hidden_dim = d;
        const double a = *detect(g, cfg, tcfg).auc;
        out.evaluated.push_back({cfg, a});
        if (!have_best || a > best_auc) {
          have_best = true;
          best_auc = a;
          out.best = cfg;
        }
      }
    }
  }
  out.winner = run_experiment(g, out.best, tcfg, final_runs, jobs);
  return out;
}

}  // namespace commgad
