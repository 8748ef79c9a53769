#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "duelsim/env.hpp"
#include "duelsim/graph.hpp"
#include "duelsim/multiplayer.hpp"

namespace duelsim {

enum class Algorithm {
  fyl_rucb,
  fyl_rmed2fh,
  mp_rucb,
  mp_rucb_norec,
  sp_rucb,
  sp_rmed2fh,
};

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm a);
bool is_single_player(Algorithm a);

/// Flat key = value experiment description. Unknown keys are rejected.
struct ExperimentConfig {
  std::string matrix_source;      // "q3" or a matrix CSV path
  Algorithm algorithm = Algorithm::sp_rucb;
  Topology graph = Topology::complete;
  std::string graph_file;         // optional custom topology
  int players = 1;
  int gamma = -1;                 // -1 means "diameter"
  double alpha = 3.0;
  double rmed_f_scale = 0.3;      // f(K) = scale * K^1.01
  long horizon = 0;
  int runs = 200;
  std::uint64_t seed = 1;
  int grid_points = 200;
  std::string out_dir = ".";
  int threads = 0;                // 0 = hardware concurrency
  bool log_draws = false;
};

ExperimentConfig load_config(const std::string& path);

/// "q3" resolves to the built-in 3-arm example; anything else is a CSV path.
PreferenceMatrix resolve_matrix(const std::string& source);

/// Strictly increasing log-spaced sample rounds in [1, horizon], always
/// containing the horizon itself.
std::vector<long> sample_grid(long horizon, int points);

/// Per-round group regret: sum over players of (delta_first + delta_second)/2.
double regret_increment(const GapProfile& gaps,
                        const std::vector<PlayerDraw>& draws);

struct DrawRecord {
  long round = 0;
  int player = 0;
  int first = 0;
  int second = 0;
  int reward = 0;
};

struct RegretTrace {
  std::vector<long> grid;
  std::vector<std::vector<double>> per_run;  // [run][grid point]
  std::vector<double> mean;
  std::vector<double> stddev;                // population std across runs
  std::vector<std::vector<DrawRecord>> logs; // filled only when log_draws
};

/// Recomputes mean and population standard deviation from per_run.
void aggregate_trace(RegretTrace& trace);

/// Executes runs with seeds seed, seed+1, ... seed+runs-1 and aggregates.
/// Identical configs produce byte-identical CSV output; run-level threading
/// never changes the result.
RegretTrace run_experiment(const ExperimentConfig& cfg);

std::string trace_csv(const RegretTrace& trace);
void emit_csv(const RegretTrace& trace, const std::string& path);

struct Series {
  std::string label;
  std::vector<double> t;
  std::vector<double> mean;
  std::vector<double> stddev;
};

Series read_trace_csv(const std::string& path);

}  // namespace duelsim
