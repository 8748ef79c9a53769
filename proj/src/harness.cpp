#include "duelsim/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

namespace duelsim {

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "fyl-rucb") return Algorithm::fyl_rucb;
  if (name == "fyl-rmed2fh") return Algorithm::fyl_rmed2fh;
  if (name == "mp-rucb") return Algorithm::mp_rucb;
  if (name == "mp-rucb-norec") return Algorithm::mp_rucb_norec;
  if (name == "sp-rucb") return Algorithm::sp_rucb;
  if (name == "sp-rmed2fh") return Algorithm::sp_rmed2fh;
  throw ConfigError("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::fyl_rucb: return "fyl-rucb";
    case Algorithm::fyl_rmed2fh: return "fyl-rmed2fh";
    case Algorithm::mp_rucb: return "mp-rucb";
    case Algorithm::mp_rucb_norec: return "mp-rucb-norec";
    case Algorithm::sp_rucb: return "sp-rucb";
    case Algorithm::sp_rmed2fh: return "sp-rmed2fh";
  }
  return "?";
}

bool is_single_player(Algorithm a) {
  return a == Algorithm::sp_rucb || a == Algorithm::sp_rmed2fh;
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const long out = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("bad integer for " + key + ": " + v);
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("bad number for " + key + ": " + v);
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("bad boolean for " + key + ": " + v);
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  ExperimentConfig cfg;
  bool have_matrix = false, have_algorithm = false, have_horizon = false;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("expected key = value on line " + std::to_string(line_no));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key == "matrix") {
      cfg.matrix_source = value;
      have_matrix = true;
    } else if (key == "algorithm") {
      cfg.algorithm = algorithm_from_name(value);
      have_algorithm = true;
    } else if (key == "graph") {
      cfg.graph = topology_from_name(value);
    } else if (key == "graph_file") {
      cfg.graph_file = value;
    } else if (key == "m") {
      cfg.players = static_cast<int>(parse_long(value, key));
    } else if (key == "gamma") {
      cfg.gamma = value == "diameter" ? -1
                                      : static_cast<int>(parse_long(value, key));
    } else if (key == "alpha") {
      cfg.alpha = parse_double(value, key);
    } else if (key == "rmed_f_scale") {
      cfg.rmed_f_scale = parse_double(value, key);
    } else if (key == "horizon") {
      cfg.horizon = parse_long(value, key);
      have_horizon = true;
    } else if (key == "runs") {
      cfg.runs = static_cast<int>(parse_long(value, key));
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_long(value, key));
    } else if (key == "grid") {
      cfg.grid_points = static_cast<int>(parse_long(value, key));
    } else if (key == "out") {
      cfg.out_dir = value;
    } else if (key == "threads") {
      cfg.threads = static_cast<int>(parse_long(value, key));
    } else if (key == "log_draws") {
      cfg.log_draws = parse_bool(value, key);
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  if (!have_matrix) throw ConfigError("config is missing 'matrix'");
  if (!have_algorithm) throw ConfigError("config is missing 'algorithm'");
  if (!have_horizon) throw ConfigError("config is missing 'horizon'");
  if (cfg.horizon < 1) throw ConfigError("horizon must be >= 1");
  if (cfg.runs < 1) throw ConfigError("runs must be >= 1");
  if (cfg.players < 1) throw ConfigError("m must be >= 1");
  if (cfg.grid_points < 1) throw ConfigError("grid must be >= 1");
  return cfg;
}

PreferenceMatrix resolve_matrix(const std::string& source) {
  if (source == "q3") return example_matrix_q3();
  return load_matrix_csv(source);
}

std::vector<long> sample_grid(long horizon, int points) {
  if (horizon < 1) throw InvalidSizeError("horizon must be >= 1");
  std::vector<long> grid;
  if (points <= 1 || horizon == 1) {
    grid.push_back(horizon);
    return grid;
  }
  const double span = std::log(static_cast<double>(horizon));
  long prev = 0;
  for (int i = 0; i < points; ++i) {
    const double x = std::exp(span * i / (points - 1));
    long t = std::lround(x);
    t = std::clamp(t, 1L, horizon);
    if (t > prev) {
      grid.push_back(t);
      prev = t;
    }
  }
  if (grid.back() != horizon) grid.push_back(horizon);
  return grid;
}

double regret_increment(const GapProfile& gaps,
                        const std::vector<PlayerDraw>& draws) {
  double sum = 0.0;
  for (const PlayerDraw& d : draws) {
    sum += 0.5 * (gaps.delta[d.first] + gaps.delta[d.second]);
  }
  return sum;
}

namespace {

struct RunSetup {
  const ExperimentConfig* cfg;
  const PreferenceMatrix* matrix;
  const GapProfile* gaps;
  const CommGraph* graph;
  int gamma;
  const std::vector<long>* grid;
  const std::vector<long>* ids;
};

void run_once(const RunSetup& setup, std::uint64_t seed,
              std::vector<double>& out, std::vector<DrawRecord>* log) {
  const ExperimentConfig& cfg = *setup.cfg;
  PolicyParams params{cfg.alpha, cfg.rmed_f_scale, cfg.horizon};

  std::unique_ptr<SinglePlayerSystem> single;
  std::unique_ptr<FylSystem> fyl;
  std::unique_ptr<MpRucbSystem> mp;
  switch (cfg.algorithm) {
    case Algorithm::sp_rucb:
      single = std::make_unique<SinglePlayerSystem>(
          *setup.matrix, BaseAlgorithm::rucb, params, seed);
      break;
    case Algorithm::sp_rmed2fh:
      single = std::make_unique<SinglePlayerSystem>(
          *setup.matrix, BaseAlgorithm::rmed2fh, params, seed);
      break;
    case Algorithm::fyl_rucb:
      fyl = std::make_unique<FylSystem>(*setup.matrix, *setup.graph,
                                        BaseAlgorithm::rucb, params,
                                        *setup.ids, seed);
      break;
    case Algorithm::fyl_rmed2fh:
      fyl = std::make_unique<FylSystem>(*setup.matrix, *setup.graph,
                                        BaseAlgorithm::rmed2fh, params,
                                        *setup.ids, seed);
      break;
    case Algorithm::mp_rucb:
    case Algorithm::mp_rucb_norec: {
      MpOptions options{cfg.alpha, cfg.algorithm == Algorithm::mp_rucb};
      mp = std::make_unique<MpRucbSystem>(*setup.matrix, *setup.graph,
                                          setup.gamma, options, seed);
      break;
    }
  }

  const auto step = [&]() -> const std::vector<PlayerDraw>& {
    if (single) return single->step();
    if (fyl) return fyl->step();
    return mp->step();
  };

  const std::vector<long>& grid = *setup.grid;
  out.assign(grid.size(), 0.0);
  double cumulative = 0.0;
  std::size_t gi = 0;
  for (long t = 1; t <= cfg.horizon; ++t) {
    const std::vector<PlayerDraw>& draws = step();
    cumulative += regret_increment(*setup.gaps, draws);
    if (log) {
      for (int m = 0; m < static_cast<int>(draws.size()); ++m) {
        log->push_back(DrawRecord{t, m, draws[m].first, draws[m].second,
                                  draws[m].reward});
      }
    }
    while (gi < grid.size() && grid[gi] == t) {
      out[gi] = cumulative;
      ++gi;
    }
  }
}

}  // namespace

void aggregate_trace(RegretTrace& trace) {
  const std::size_t points = trace.grid.size();
  const std::size_t runs = trace.per_run.size();
  trace.mean.assign(points, 0.0);
  trace.stddev.assign(points, 0.0);
  for (std::size_t g = 0; g < points; ++g) {
    double sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) sum += trace.per_run[r][g];
    const double mean = sum / static_cast<double>(runs);
    double var = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
      const double d = trace.per_run[r][g] - mean;
      var += d * d;
    }
    trace.mean[g] = mean;
    trace.stddev[g] = std::sqrt(var / static_cast<double>(runs));
  }
}

RegretTrace run_experiment(const ExperimentConfig& cfg) {
  const PreferenceMatrix matrix = resolve_matrix(cfg.matrix_source);
  const GapProfile gaps = require_gaps(matrix);

  const int players = is_single_player(cfg.algorithm) ? 1 : cfg.players;
  const CommGraph graph = cfg.graph_file.empty()
                              ? build_canonical(cfg.graph, players)
                              : load_graph(cfg.graph_file);
  if (!cfg.graph_file.empty() && graph.players() != players &&
      !is_single_player(cfg.algorithm)) {
    throw ConfigError("graph file player count disagrees with m");
  }
  const DistanceTable dist = DistanceTable::bfs(graph);
  const int gamma =
      cfg.gamma < 0 ? dist.diameter() : std::min(cfg.gamma, dist.diameter());
  std::vector<long> ids(graph.players());
  std::iota(ids.begin(), ids.end(), 0);

  RegretTrace trace;
  trace.grid = sample_grid(cfg.horizon, cfg.grid_points);
  trace.per_run.assign(cfg.runs, {});
  if (cfg.log_draws) trace.logs.assign(cfg.runs, {});

  RunSetup setup{&cfg, &matrix, &gaps, &graph, gamma, &trace.grid, &ids};

  int workers = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, cfg.runs);

  std::exception_ptr failure;
  std::mutex failure_lock;
  const auto work = [&](int worker) {
    for (int r = worker; r < cfg.runs; r += workers) {
      try {
        run_once(setup, cfg.seed + static_cast<std::uint64_t>(r),
                 trace.per_run[r], cfg.log_draws ? &trace.logs[r] : nullptr);
      } catch (...) {
        std::lock_guard<std::mutex> hold(failure_lock);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  aggregate_trace(trace);
  return trace;
}

namespace {

std::string format_value(double v) {
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), v,
                                 std::chars_format::general, 9);
  return std::string(buffer, res.ptr);
}

}  // namespace

std::string trace_csv(const RegretTrace& trace) {
  if (trace.grid.empty()) throw InvalidSizeError("empty trace");
  std::string out = "t,mean_group_regret,std_group_regret,runs\n";
  const long runs = static_cast<long>(trace.per_run.size());
  for (std::size_t g = 0; g < trace.grid.size(); ++g) {
    out += std::to_string(trace.grid[g]);
    out += ',';
    out += format_value(trace.mean[g]);
    out += ',';
    out += format_value(trace.stddev[g]);
    out += ',';
    out += std::to_string(runs);
    out += '\n';
  }
  return out;
}

void emit_csv(const RegretTrace& trace, const std::string& path) {
  const std::string body = trace_csv(trace);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << body;
  if (!out) throw IoError("write failed: " + path);
}

Series read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  Series s;
  s.label = std::filesystem::path(path).stem().string();
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty csv: " + path);
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    std::string field;
    double values[3];
    for (int i = 0; i < 3; ++i) {
      if (!std::getline(row, field, ',')) {
        throw ParseError("short row in " + path);
      }
      values[i] = parse_double(trim(field), "csv field");
    }
    s.t.push_back(values[0]);
    s.mean.push_back(values[1]);
    s.stddev.push_back(values[2]);
  }
  if (s.t.empty()) throw ParseError("csv has no data rows: " + path);
  return s;
}

}  // namespace duelsim
