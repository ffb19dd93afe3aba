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

// Command-line entry point: detect, experiment, homophily, communities,
// inject, convert.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "commgad/community.hpp"
#include "commgad/convert.hpp"
#include "commgad/error.hpp"
#include "commgad/experiment.hpp"
#include "commgad/graph_io.hpp"
#include "commgad/output_files.hpp"
#include "commgad/run_config.hpp"
#include "commgad/scoring.hpp"
#include "commgad/synthetic.hpp"
#include "commgad/train.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> jobs;
  std::string output;
};

void report_cleanup(const commgad::EdgeCleanup& c) {
  if (c.self_loops_dropped) std::cerr << "warning: dropped " << c.self_loops_dropped << " self-loop(s)\n";
}

commgad::RunConfig run_config_from(const GlobalFlags& flags) {
  if (flags.config.empty()) throw commgad::ConfigError("--config is required");
  commgad::RunConfig rc = commgad::load_run_config(flags.config);
  if (flags.seed) rc.train.seed = rc.model.seed = *flags.seed;
  if (flags.jobs) rc.jobs = *flags.jobs;
  if (!flags.output.empty()) rc.output = flags.output;
  return rc;
}

commgad::AttributedGraph load(const commgad::RunConfig& rc) {
  commgad::EdgeCleanup cleanup;
  auto g = commgad::load_graph(rc.edges, rc.features, rc.labels, &cleanup);
  report_cleanup(cleanup);
  return g;
}

int cmd_detect(const GlobalFlags& flags, const std::string& dump_tape) {
  commgad::RunConfig rc = run_config_from(flags);
  rc.validate();
  const auto g = load(rc);

  commgad::OutputSet out(rc.output);
  auto& log = out.open("train_log.jsonl");
  const commgad::AnomalyReport report =
      commgad::detect(g, rc.model, rc.train, [&](const commgad::EpochRecord& r) { commgad::write_epoch_jsonl(log, r); });
  out.write("report.json", commgad::report_to_json(report));
  out.write("scores.csv", commgad::scores_to_csv(report, g.labels()));
  if (!dump_tape.empty()) {
    // Re-run the trained model's forward pass on a fresh tape for inspection.
    commgad::ModelConfig cfg = rc.model;
    cfg.seed = rc.train.seed;
    const auto tr = commgad::train(g, cfg, rc.train);
    commgad::Tape tape;
    commgad::forward_on_tape(tape, commgad::prepare_inputs(g, tr.communities), cfg, tr.params);
    out.write(dump_tape, tape.to_json());
  }
  out.commit();

  std::cout << "nodes " << g.num_nodes() << ", edges " << g.num_edges() << ", communities "
            << report.meta.num_communities << "\n";
  std::cout << "lambda_n' " << report.weights.lambda_n << ", lambda_x' " << report.weights.lambda_x << "\n";
  if (report.auc) std::cout << "AUC " << *report.auc << "\n";
  std::cout << "wrote " << (rc.output / "report.json").string() << "\n";
  return 0;
}

json summary_json(const commgad::ExperimentSummary& s) {
  json j{{"mean_auc", s.mean_auc}, {"std_auc", s.std_auc}, {"best_auc", s.best_auc}};
  for (const auto& r : s.runs) {
    j["runs"].push_back({{"seed", r.meta.seed},
                         {"auc", *r.auc},
                         {"lambda_n_prime", r.weights.lambda_n},
                         {"lambda_x_prime", r.weights.lambda_x},
                         {"num_communities", r.meta.num_communities},
                         {"mean_epoch_seconds", r.meta.mean_epoch_seconds}});
  }
  return j;
}

int cmd_experiment(const GlobalFlags& flags, std::optional<std::size_t> runs) {
  commgad::RunConfig rc = run_config_from(flags);
  if (runs) rc.runs = *runs;
  rc.validate();
  if (!rc.labels) throw commgad::ConfigError("experiment needs a 'labels' file");
  const auto g = load(rc);

  commgad::OutputSet out(rc.output);
  commgad::ExperimentSummary s;
  json doc;
  if (rc.grid) {
    const auto gs = commgad::grid_search(g, *rc.grid, rc.model, rc.train, rc.runs, rc.jobs);
    s = gs.winner;
    for (const auto& p : gs.evaluated) {
      doc["grid"].push_back({{"lambda_x", p.config.lambda_x},
                             {"lambda_n", p.config.lambda_n},
                             {"hidden_dim", p.config.hidden_dim},
                             {"auc", p.auc}});
    }
    doc["best"] = {{"lambda_x", gs.best.lambda_x}, {"lambda_n", gs.best.lambda_n}, {"hidden_dim", gs.best.hidden_dim}};
    rc.model = gs.best;
  } else {
    s = commgad::run_experiment(g, rc.model, rc.train, rc.runs, rc.jobs);
  }
  doc["summary"] = summary_json(s);
  doc["config"] = {{"lambda_x", rc.model.lambda_x},
                   {"lambda_n", rc.model.lambda_n},
                   {"hidden_dim", rc.model.hidden_dim},
                   {"epochs", rc.train.epochs},
                   {"community_algorithm", std::string(commgad::to_string(rc.train.community))}};
  out.write("experiment.json", doc.dump(2));
  out.commit();

  std::cout.setf(std::ios::fixed);
  std::cout.precision(2);
  std::cout << "AUC " << 100.0 * s.mean_auc << " ± " << 100.0 * s.std_auc << " (best " << 100.0 * s.best_auc
            << ") over " << s.runs.size() << " run(s)\n";
  return 0;
}

commgad::AttributedGraph load_plain(const std::string& edges, const std::string& features, const GlobalFlags& flags) {
  if (!edges.empty() && !features.empty()) {
    commgad::EdgeCleanup cleanup;
    auto g = commgad::load_graph(edges, features, std::nullopt, &cleanup);
    report_cleanup(cleanup);
    return g;
  }
  if (flags.config.empty()) throw commgad::ConfigError("give --edges and --features, or --config");
  const commgad::RunConfig rc = commgad::load_run_config(flags.config);
  return commgad::load_graph(rc.edges, rc.features);
}

int cmd_homophily(const GlobalFlags& flags, const std::string& edges, const std::string& features) {
  const auto g = load_plain(edges, features, flags);
  std::cout.precision(6);
  std::cout << "nodes " << g.num_nodes() << ", edges " << g.num_edges() << " (" << g.num_directed_entries()
            << " directed entries), features " << g.feature_dim() << "\n";
  std::cout << "homophily " << commgad::homophily_ratio(g) << "\n";
  return 0;
}

int cmd_communities(const GlobalFlags& flags, const std::string& edges, const std::string& features,
                    const std::string& algo_name) {
  const auto g = load_plain(edges, features, flags);
  const auto algo = commgad::parse_community_algorithm(algo_name);
  const std::uint64_t seed = flags.seed.value_or(0);
  const auto a = commgad::detect_communities(g, algo, seed);

  std::string csv = "node_id,community_id\n";
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    csv += std::to_string(i) + "," + std::to_string(a.labels[i]) + "\n";
  }
  json summary{{"algorithm", std::string(commgad::to_string(algo))},
               {"seed", seed},
               {"num_nodes", g.num_nodes()},
               {"num_communities", a.num_communities}};
  summary["modularity"] = g.num_edges() > 0 ? json(commgad::modularity(g, a)) : json(nullptr);

  commgad::OutputSet out(flags.output.empty() ? fs::path("out") : fs::path(flags.output));
  out.write("communities.csv", csv);
  out.write("communities.json", summary.dump(2));
  out.commit();
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_inject(const GlobalFlags& flags) {
  if (flags.config.empty()) throw commgad::ConfigError("--config is required");
  commgad::InjectRunConfig ic = commgad::load_inject_config(flags.config);
  if (flags.seed) ic.seed = *flags.seed;
  if (!flags.output.empty()) ic.output = flags.output;
  ic.validate();

  commgad::AttributedGraph base;
  if (ic.synthetic) {
    commgad::SyntheticConfig sc = *ic.synthetic;
    sc.seed = ic.seed;
    base = commgad::generate_synthetic(sc).graph;
  } else {
    commgad::EdgeCleanup cleanup;
    base = commgad::load_graph(*ic.edges, *ic.features, std::nullopt, &cleanup);
    report_cleanup(cleanup);
  }
  commgad::InjectionConfig inj = ic.injection;
  inj.seed = ic.seed;
  const auto res = commgad::inject_anomalies(base, inj);

  // Stage into a sibling directory so a failed run leaves nothing behind.
  const fs::path staging = ic.output.string() + ".partial";
  fs::remove_all(staging);
  try {
    commgad::save_graph(staging, res.graph, ic.binary_features);
    json meta{{"seed", ic.seed}, {"num_nodes", res.graph.num_nodes()}, {"num_edges", res.graph.num_edges()},
              {"cliques", res.cliques}, {"contextual", res.contextual}};
    std::ofstream(staging / "injection.json") << meta.dump(2) << "\n";
    fs::create_directories(ic.output);
    for (const auto& entry : fs::directory_iterator(staging)) {
      fs::rename(entry.path(), ic.output / entry.path().filename());
    }
    fs::remove_all(staging);
  } catch (...) {
    fs::remove_all(staging);
    throw;
  }
  std::size_t anomalies = 0;
  for (int l : *res.graph.labels()) anomalies += static_cast<std::size_t>(l);
  std::cout << "nodes " << res.graph.num_nodes() << ", edges " << res.graph.num_edges() << ", anomalies "
            << anomalies << " (" << 100.0 * static_cast<double>(anomalies) / static_cast<double>(res.graph.num_nodes())
            << "%)\n";
  return 0;
}

struct ConvertArgs {
  std::string format;
  std::string content, cites;
  std::string edge_index, x, y;
  bool binary = false;
};

int cmd_convert(const GlobalFlags& flags, const ConvertArgs& args) {
  commgad::ConvertStats stats;
  commgad::AttributedGraph g;
  if (args.format == "linqs") {
    if (args.content.empty() || args.cites.empty()) throw commgad::ConfigError("linqs needs --content and --cites");
    g = commgad::convert_linqs(args.content, args.cites, &stats);
  } else if (args.format == "pyg-csv") {
    if (args.edge_index.empty() || args.x.empty()) throw commgad::ConfigError("pyg-csv needs --edge-index and --x");
    std::optional<fs::path> y;
    if (!args.y.empty()) y = args.y;
    g = commgad::convert_pyg_csv(args.edge_index, args.x, y, &stats);
  } else {
    throw commgad::ConfigError("unknown format '" + args.format + "' (linqs | pyg-csv)");
  }
  const fs::path out = flags.output.empty() ? fs::path("data") : fs::path(flags.output);
  commgad::save_graph(out, g, args.binary);
  std::cout << "nodes " << g.num_nodes() << ", edges " << g.num_edges() << " (" << g.num_directed_entries()
            << " directed entries), features " << g.feature_dim() << "\n";
  std::cout << "read " << stats.edges_read << " edge rows, skipped " << stats.edges_skipped << ", self-loops "
            << stats.cleanup.self_loops_dropped << ", duplicates " << stats.cleanup.duplicates_collapsed << "\n";
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Community-smoothed graph autoencoder for node anomaly detection"};
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config, "JSON run configuration");
  app.add_option("--seed", flags.seed, "Root seed (overrides the config)");
  app.add_option("--jobs", flags.jobs, "Parallel runs for experiment")->check(CLI::PositiveNumber);
  app.add_option("--output", flags.output, "Output directory");

  auto* detect = app.add_subcommand("detect", "Train once and write report.json, scores.csv, train_log.jsonl");
  detect->fallthrough();
  std::string dump_tape;
  detect->add_option("--dump-tape", dump_tape, "Also write the final forward tape as JSON under this file name");

  auto* experiment = app.add_subcommand("experiment", "Repeat training over seeds and report mean ± std AUC");
  experiment->fallthrough();
  std::optional<std::size_t> runs;
  experiment->add_option("--runs", runs, "Number of seeded runs")->check(CLI::PositiveNumber);

  std::string edges, features, algo = "louvain";
  auto* homophily = app.add_subcommand("homophily", "Print the feature-cosine homophily ratio");
  homophily->fallthrough();
  homophily->add_option("--edges", edges);
  homophily->add_option("--features", features);

  auto* communities = app.add_subcommand("communities", "Detect communities; write CSV and JSON summary");
  communities->fallthrough();
  communities->add_option("--edges", edges);
  communities->add_option("--features", features);
  communities->add_option("--algo", algo, "louvain | labelprop");

  auto* inject = app.add_subcommand("inject", "Generate or load a graph and inject labelled anomalies");
  inject->fallthrough();

  ConvertArgs conv;
  auto* convert = app.add_subcommand("convert", "Convert a public benchmark dump to the native format");
  convert->fallthrough();
  convert->add_option("--format", conv.format, "linqs | pyg-csv")->required();
  convert->add_option("--content", conv.content, "LINQS .content file");
  convert->add_option("--cites", conv.cites, "LINQS .cites file");
  convert->add_option("--edge-index", conv.edge_index, "edge_index CSV (2×E or E×2)");
  convert->add_option("--x", conv.x, "feature CSV");
  convert->add_option("--y", conv.y, "label CSV (non-zero = anomaly)");
  convert->add_flag("--binary", conv.binary, "Write features in the binary FGFM format");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*detect) return cmd_detect(flags, dump_tape);
    if (*experiment) return cmd_experiment(flags, runs);
    if (*homophily) return cmd_homophily(flags, edges, features);
    if (*communities) return cmd_communities(flags, edges, features, algo);
    if (*inject) return cmd_inject(flags);
    if (*convert) return cmd_convert(flags, conv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
