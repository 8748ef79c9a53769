#include "duelsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace duelsim {

namespace {

void check_range(double v, int i, int j) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw RangeError("matrix entry (" + std::to_string(i) + "," +
                     std::to_string(j) + ") = " + std::to_string(v) +
                     " outside [0,1]");
  }
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

double parse_decimal(const std::string& field, int row) {
  const std::string t = trim(field);
  if (t.empty()) throw ParseError("empty field in row " + std::to_string(row));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ParseError("bad decimal '" + t + "' in row " + std::to_string(row));
  }
  if (used != t.size()) {
    throw ParseError("bad decimal '" + t + "' in row " + std::to_string(row));
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

PreferenceMatrix PreferenceMatrix::from_full(
    const std::vector<std::vector<double>>& q, double tolerance) {
  const int k = static_cast<int>(q.size());
  if (k < 2) throw InvalidSizeError("preference matrix needs at least 2 arms");
  for (int i = 0; i < k; ++i) {
    if (static_cast<int>(q[i].size()) != k) {
      throw ParseError("row " + std::to_string(i) + " has " +
                       std::to_string(q[i].size()) + " fields, expected " +
                       std::to_string(k));
    }
  }
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(k) * (k - 1) / 2);
  for (int i = 0; i < k; ++i) {
    check_range(q[i][i], i, i);
    if (std::abs(q[i][i] - 0.5) > tolerance) {
      throw AsymmetryError("diagonal entry " + std::to_string(i) + " = " +
                           std::to_string(q[i][i]) + " is not 0.5");
    }
    for (int j = i + 1; j < k; ++j) {
      check_range(q[i][j], i, j);
      check_range(q[j][i], j, i);
      if (std::abs(q[i][j] + q[j][i] - 1.0) > tolerance) {
        throw AsymmetryError("entries (" + std::to_string(i) + "," +
                             std::to_string(j) + ") violate q_ij + q_ji = 1");
      }
      upper.push_back(q[i][j]);
    }
  }
  return PreferenceMatrix(k, std::move(upper));
}

PreferenceMatrix PreferenceMatrix::from_upper(int arms,
                                              std::vector<double> upper) {
  if (arms < 2) throw InvalidSizeError("preference matrix needs at least 2 arms");
  const std::size_t expect = static_cast<std::size_t>(arms) * (arms - 1) / 2;
  if (upper.size() != expect) {
    throw InvalidSizeError("upper triangle size mismatch");
  }
  for (double v : upper) check_range(v, -1, -1);
  return PreferenceMatrix(arms, std::move(upper));
}

PreferenceMatrix example_matrix_q3() {
  return PreferenceMatrix::from_full(
      {{0.5, 0.6, 0.7}, {0.4, 0.5, 0.6}, {0.3, 0.4, 0.5}});
}

MatrixAnalysis analyze(const PreferenceMatrix& q) {
  const int k = q.arms();
  MatrixAnalysis out;
  out.condorcet.superiors.assign(k, {});
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i != j && q.prob(i, j) < 0.5) out.condorcet.superiors[i].push_back(j);
    }
  }
  for (int i = 0; i < k; ++i) {
    bool beats_all = true;
    for (int j = 0; j < k && beats_all; ++j) {
      if (i != j && !(q.prob(i, j) > 0.5)) beats_all = false;
    }
    if (beats_all) {
      out.condorcet.winner = i;
      break;  // at most one arm can beat every other
    }
  }
  if (out.condorcet.winner) {
    const int cw = *out.condorcet.winner;
    GapProfile gaps;
    gaps.winner = cw;
    gaps.delta.resize(k);
    gaps.delta_min = std::numeric_limits<double>::infinity();
    gaps.delta_max = 0.0;
    for (int i = 0; i < k; ++i) {
      gaps.delta[i] = q.prob(cw, i) - 0.5;
      if (i != cw) {
        gaps.delta_min = std::min(gaps.delta_min, gaps.delta[i]);
        gaps.delta_max = std::max(gaps.delta_max, gaps.delta[i]);
      }
    }
    out.gaps = std::move(gaps);
  }
  return out;
}

GapProfile require_gaps(const PreferenceMatrix& q) {
  MatrixAnalysis a = analyze(q);
  if (!a.gaps) throw NoCondorcetWinnerError("matrix has no Condorcet winner");
  return *a.gaps;
}

int sample_duel(const PreferenceMatrix& q, int i, int j, Stream& rng) {
  if (i <= j) return rng.bernoulli(q.prob(i, j)) ? 1 : 0;
  return rng.bernoulli(q.prob(j, i)) ? 0 : 1;
}

PreferenceMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> vals;
    for (const auto& field : split(line, ',')) {
      vals.push_back(parse_decimal(field, row));
    }
    rows.push_back(std::move(vals));
    ++row;
  }
  if (rows.empty()) throw ParseError("matrix file is empty: " + path);
  for (const auto& r : rows) {
    if (r.size() != rows.size()) {
      throw ParseError("matrix file is not square: " + path);
    }
  }
  return PreferenceMatrix::from_full(rows);
}

void save_matrix_csv(const PreferenceMatrix& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix file: " + path);
  out.precision(17);
  for (int i = 0; i < q.arms(); ++i) {
    for (int j = 0; j < q.arms(); ++j) {
      if (j) out << ',';
      out << q.prob(i, j);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path);
}

BallotSet load_ballots(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ballot file: " + path);
  BallotSet set;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("ballot file is empty");
  const std::string header = trim(line);
  const std::string prefix = "candidates:";
  if (header.rfind(prefix, 0) != 0) {
    throw ParseError("ballot file must start with 'candidates: ...'");
  }
  for (const auto& name : split(header.substr(prefix.size()), ',')) {
    const std::string n = trim(name);
    if (n.empty()) throw ParseError("empty candidate name");
    if (std::find(set.candidates.begin(), set.candidates.end(), n) !=
        set.candidates.end()) {
      throw ParseError("duplicate candidate name: " + n);
    }
    set.candidates.push_back(n);
  }
  auto candidate_index = [&](const std::string& n) {
    auto it = std::find(set.candidates.begin(), set.candidates.end(), n);
    if (it == set.candidates.end()) {
      throw ParseError("unknown candidate in ballot: " + n);
    }
    return static_cast<int>(it - set.candidates.begin());
  };
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto colon = t.find(':');
    if (colon == std::string::npos) {
      throw ParseError("missing ':' on ballot line " + std::to_string(line_no));
    }
    Ballot b;
    try {
      b.count = std::stol(trim(t.substr(0, colon)));
    } catch (const std::exception&) {
      throw ParseError("bad multiplicity on line " + std::to_string(line_no));
    }
    if (b.count < 1) {
      throw ParseError("multiplicity must be >= 1 on line " +
                       std::to_string(line_no));
    }
    for (const auto& name : split(t.substr(colon + 1), '>')) {
      const int idx = candidate_index(trim(name));
      if (std::find(b.ranking.begin(), b.ranking.end(), idx) !=
          b.ranking.end()) {
        throw ParseError("duplicate candidate in ranking on line " +
                         std::to_string(line_no));
      }
      b.ranking.push_back(idx);
    }
    if (b.ranking.empty()) {
      throw ParseError("empty ranking on line " + std::to_string(line_no));
    }
    set.ballots.push_back(std::move(b));
  }
  return set;
}

namespace {

// wins[i][j] = total ballot weight putting i above j, with a ranked candidate
// beating an unranked one. Both-unranked pairs contribute nothing.
std::vector<std::vector<long>> pairwise_wins(const BallotSet& set,
                                             const std::vector<int>& ids) {
  const int n = static_cast<int>(ids.size());
  std::vector<std::vector<long>> wins(n, std::vector<long>(n, 0));
  std::vector<int> rank(set.candidates.size());
  for (const Ballot& b : set.ballots) {
    std::fill(rank.begin(), rank.end(), -1);
    for (std::size_t r = 0; r < b.ranking.size(); ++r) {
      rank[b.ranking[r]] = static_cast<int>(r);
    }
    for (int a = 0; a < n; ++a) {
      for (int c = a + 1; c < n; ++c) {
        const int ra = rank[ids[a]];
        const int rc = rank[ids[c]];
        if (ra < 0 && rc < 0) continue;
        const bool a_wins = rc < 0 || (ra >= 0 && ra < rc);
        if (a_wins) {
          wins[a][c] += b.count;
        } else {
          wins[c][a] += b.count;
        }
      }
    }
  }
  return wins;
}

}  // namespace

PreferenceMatrix ballots_to_matrix(const BallotSet& set,
                                   std::optional<int> top_n,
                                   std::vector<int>* kept) {
  if (set.ballots.empty()) throw EmptyBallotsError("no ballots");
  const int total = static_cast<int>(set.candidates.size());
  if (total < 2) throw InvalidSizeError("need at least 2 candidates");
  if (top_n && (*top_n < 2 || *top_n > total)) {
    throw InvalidSizeError("top_n must be in [2, candidate count]");
  }

  std::vector<int> ids(total);
  std::iota(ids.begin(), ids.end(), 0);

  if (top_n && *top_n < total) {
    const auto wins = pairwise_wins(set, ids);
    std::vector<long> score(total, 0);
    for (int i = 0; i < total; ++i) {
      for (int j = 0; j < total; ++j) score[i] += wins[i][j];
    }
    // Highest total pairwise win count first; stable, so listed order breaks ties.
    std::stable_sort(ids.begin(), ids.end(),
                     [&](int a, int b) { return score[a] > score[b]; });
    ids.resize(*top_n);
    std::sort(ids.begin(), ids.end());
  }

  const auto wins = pairwise_wins(set, ids);
  const int n = static_cast<int>(ids.size());
  std::vector<double> upper;
  upper.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const long eligible = wins[i][j] + wins[j][i];
      upper.push_back(eligible == 0
                          ? 0.5
                          : static_cast<double>(wins[i][j]) / eligible);
    }
  }
  if (kept) *kept = ids;
  return PreferenceMatrix::from_upper(n, std::move(upper));
}

}  // namespace duelsim
