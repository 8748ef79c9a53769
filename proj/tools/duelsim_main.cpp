#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "duelsim/harness.hpp"
#include "duelsim/plot.hpp"
#include "duelsim/theory.hpp"

namespace {

using namespace duelsim;

int cmd_run(const std::string& config_path, std::optional<int> runs,
            std::optional<long> seed, std::optional<long> horizon,
            std::optional<std::string> out_dir) {
  ExperimentConfig cfg = load_config(config_path);
  if (runs) cfg.runs = *runs;
  if (seed) cfg.seed = static_cast<std::uint64_t>(*seed);
  if (horizon) cfg.horizon = *horizon;
  if (out_dir) cfg.out_dir = *out_dir;

  const RegretTrace trace = run_experiment(cfg);
  std::filesystem::create_directories(cfg.out_dir);
  const std::string out =
      (std::filesystem::path(cfg.out_dir) / (algorithm_name(cfg.algorithm) + ".csv"))
          .string();
  emit_csv(trace, out);
  std::cout << "wrote " << out << "\n";
  std::cout << "final mean group regret at t=" << trace.grid.back() << ": "
            << trace.mean.back() << " (std " << trace.stddev.back() << ", "
            << trace.per_run.size() << " runs)\n";
  return 0;
}

int cmd_bounds(const std::string& config_path, double delta,
               const std::string& curve_path) {
  const ExperimentConfig cfg = load_config(config_path);
  const PreferenceMatrix matrix = resolve_matrix(cfg.matrix_source);
  const int players = is_single_player(cfg.algorithm) ? 1 : cfg.players;
  const CommGraph graph = cfg.graph_file.empty()
                              ? build_canonical(cfg.graph, players)
                              : load_graph(cfg.graph_file);
  const DistanceTable dist = DistanceTable::bfs(graph);
  const int gamma =
      cfg.gamma < 0 ? dist.diameter() : std::min(cfg.gamma, dist.diameter());
  const std::optional<Topology> shape =
      cfg.graph_file.empty() ? std::optional<Topology>(cfg.graph) : std::nullopt;
  const CliqueAnalytics analytics =
      clique_analytics(graph, dist, gamma, shape, /*allow_greedy=*/true);
  const BoundBase base = cfg.algorithm == Algorithm::fyl_rmed2fh ||
                                 cfg.algorithm == Algorithm::sp_rmed2fh
                             ? BoundBase::rmed2fh
                             : BoundBase::rucb;
  const BoundReport report =
      make_bound_report(matrix, analytics, graph.players(), dist.diameter(),
                        dist.diameter() + 1, cfg.alpha, delta, base);
  std::cout << format_bound_report(report);

  if (!curve_path.empty()) {
    std::ofstream out(curve_path, std::ios::binary);
    if (!out) throw IoError("cannot write " + curve_path);
    out << "t,lower,mp_upper,fyl_upper\n";
    out.precision(9);
    for (long t : sample_grid(std::max(cfg.horizon, 2L), cfg.grid_points)) {
      if (t < 2) continue;  // log t is zero or negative below 2
      out << t << ',' << report.lower_coeff * std::log(static_cast<double>(t))
          << ',' << report.thm3.value(static_cast<double>(t)) << ','
          << report.fyl.value(static_cast<double>(t)) << '\n';
    }
    std::cout << "wrote " << curve_path << "\n";
  }
  return 0;
}

int cmd_graphinfo(const std::string& kind, int m, int gamma,
                  const std::string& file) {
  const CommGraph graph =
      file.empty() ? build_canonical(topology_from_name(kind), m)
                   : load_graph(file);
  const DistanceTable dist = DistanceTable::bfs(graph);
  const int g = gamma < 0 ? dist.diameter() : gamma;
  const std::optional<Topology> shape =
      file.empty() ? std::optional<Topology>(topology_from_name(kind))
                   : std::nullopt;
  const CliqueAnalytics analytics =
      clique_analytics(graph, dist, g, shape, /*allow_greedy=*/true);

  std::cout << "players  = " << graph.players() << "\n";
  std::cout << "edges    = " << graph.edge_count() << "\n";
  std::cout << "diameter = " << dist.diameter() << "\n";
  std::cout << "gamma    = " << g << "\n";
  std::cout << "chi      = " << analytics.chi
            << (analytics.exact ? "" : " (greedy upper bound)") << "\n";
  std::cout << "max_deg  = " << analytics.max_degree << "\n";
  if (graph.players() <= 12) {
    std::cout << "distances:\n";
    for (int u = 0; u < graph.players(); ++u) {
      std::cout << "  ";
      for (int v = 0; v < graph.players(); ++v) {
        std::cout << dist.dist(u, v) << (v + 1 < graph.players() ? " " : "");
      }
      std::cout << "\n";
    }
  }
  std::cout << "largest clique per player (columns gamma' = 0.." << g << "):\n";
  for (int p = 0; p < graph.players(); ++p) {
    std::cout << "  player " << p << ":";
    for (int gp = 0; gp <= g; ++gp) {
      std::cout << ' ' << analytics.largest_clique[p][gp];
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_dataset(const std::string& ballots_path, std::optional<int> top,
                const std::string& out_path) {
  const BallotSet ballots = load_ballots(ballots_path);
  std::vector<int> kept;
  const PreferenceMatrix matrix = ballots_to_matrix(
      ballots, top ? std::optional<int>(*top) : std::nullopt, &kept);
  save_matrix_csv(matrix, out_path);
  std::cout << "wrote " << out_path << " (" << matrix.arms() << " arms)\n";
  for (std::size_t i = 0; i < kept.size(); ++i) {
    std::cout << "arm " << i << " = " << ballots.candidates[kept[i]] << "\n";
  }
  const MatrixAnalysis analysis = analyze(matrix);
  if (analysis.condorcet.winner) {
    std::cout << "condorcet winner: arm " << *analysis.condorcet.winner << " ("
              << ballots.candidates[kept[*analysis.condorcet.winner]] << ")\n";
  } else {
    std::cout << "no condorcet winner\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiplayer dueling-bandit simulator"};
  app.require_subcommand(1);

  // run
  std::string run_config;
  std::optional<int> run_runs;
  std::optional<long> run_seed, run_horizon;
  std::optional<std::string> run_out;
  auto* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", run_config, "key = value config file")->required();
  run->add_option("--runs", run_runs, "override run count");
  run->add_option("--seed", run_seed, "override base seed");
  run->add_option("--horizon", run_horizon, "override horizon");
  run->add_option("--out", run_out, "override output directory");

  // bounds
  std::string bounds_config, bounds_curve;
  double bounds_delta = 0.05;
  auto* bounds = app.add_subcommand("bounds", "evaluate regret bounds");
  bounds->add_option("config", bounds_config, "key = value config file")
      ->required();
  bounds->add_option("--delta", bounds_delta, "confidence parameter");
  bounds->add_option("--curve", bounds_curve, "write bound curves to CSV");

  // graphinfo
  std::string gi_kind = "complete", gi_file;
  int gi_m = 2, gi_gamma = -1;
  auto* graphinfo =
      app.add_subcommand("graphinfo", "distances and clique analytics");
  graphinfo->add_option("--kind", gi_kind, "complete|cycle|path|star");
  graphinfo->add_option("--m", gi_m, "player count");
  graphinfo->add_option("--gamma", gi_gamma, "decay parameter (default diameter)");
  graphinfo->add_option("--file", gi_file, "custom graph file");

  // dataset
  std::string ds_ballots, ds_out = "matrix.csv";
  std::optional<int> ds_top;
  auto* dataset =
      app.add_subcommand("dataset", "build a preference matrix from ballots");
  dataset->add_option("--ballots", ds_ballots, "ballot file")->required();
  dataset->add_option("--top", ds_top, "keep only the top-N candidates");
  dataset->add_option("--out", ds_out, "output matrix CSV");

  // plot
  std::string plot_out;
  std::vector<std::string> plot_inputs;
  bool plot_logy = false;
  auto* plot = app.add_subcommand("plot", "render trace CSVs as SVG");
  plot->add_option("svg", plot_out, "output SVG path")->required();
  plot->add_option("csv", plot_inputs, "input trace CSVs")->required();
  plot->add_flag("--logy", plot_logy, "log-scale the y axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(run_config, run_runs, run_seed, run_horizon, run_out);
    if (*bounds) return cmd_bounds(bounds_config, bounds_delta, bounds_curve);
    if (*graphinfo) return cmd_graphinfo(gi_kind, gi_m, gi_gamma, gi_file);
    if (*dataset) return cmd_dataset(ds_ballots, ds_top, ds_out);
    if (*plot) {
      duelsim::PlotOptions options;
      options.log_y = plot_logy;
      duelsim::emit_plot(plot_inputs, plot_out, options);
      std::cout << "wrote " << plot_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
