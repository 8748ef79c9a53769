#pragma once

#include <optional>
#include <string>
#include <vector>

#include "duelsim/errors.hpp"
#include "duelsim/rng.hpp"

namespace duelsim {

/// K x K duel-win probabilities. Only the strict upper triangle is stored;
/// q_ji is derived as 1 - q_ij and the diagonal is fixed at 0.5, so the
/// complement identity holds structurally rather than by validation.
class PreferenceMatrix {
 public:
  /// Builds from a full matrix. Entries must lie in [0,1], the diagonal must
  /// be within `tolerance` of 0.5 and |q_ij + q_ji - 1| <= tolerance for all
  /// pairs. The stored values come from the upper triangle only.
  static PreferenceMatrix from_full(const std::vector<std::vector<double>>& q,
                                    double tolerance = 1e-6);

  /// Builds from the strict upper triangle in row-major order:
  /// q_01, q_02, ..., q_0(K-1), q_12, ...
  static PreferenceMatrix from_upper(int arms, std::vector<double> upper);

  int arms() const { return k_; }

  double prob(int i, int j) const {
    if (i == j) return 0.5;
    if (i < j) return upper_[index(i, j)];
    return 1.0 - upper_[index(j, i)];
  }

 private:
  PreferenceMatrix(int arms, std::vector<double> upper)
      : k_(arms), upper_(std::move(upper)) {}

  std::size_t index(int i, int j) const {
    // i < j
    return static_cast<std::size_t>(i) * (2 * k_ - i - 1) / 2 + (j - i - 1);
  }

  int k_;
  std::vector<double> upper_;
};

/// The 3-arm totally ordered example matrix used across the test suite.
PreferenceMatrix example_matrix_q3();

struct CondorcetInfo {
  std::optional<int> winner;
  std::vector<std::vector<int>> superiors;  // superiors[i] = arms that beat i
};

struct GapProfile {
  int winner = 0;
  std::vector<double> delta;  // delta[i] = q(winner, i) - 0.5, 0 at the winner
  double delta_min = 0.0;     // over i != winner
  double delta_max = 0.0;
};

struct MatrixAnalysis {
  CondorcetInfo condorcet;
  std::optional<GapProfile> gaps;  // present iff a Condorcet winner exists
};

/// Pure and deterministic; never fails. Gap profile is absent without a
/// Condorcet winner.
MatrixAnalysis analyze(const PreferenceMatrix& q);

/// Gap profile of the Condorcet winner, or NoCondorcetWinnerError.
GapProfile require_gaps(const PreferenceMatrix& q);

/// One Bernoulli duel between arms i and j; returns 1 when i wins. The coin
/// is oriented by the lower arm index, so sampling (j, i) from the same
/// stream state yields the exact complement.
int sample_duel(const PreferenceMatrix& q, int i, int j, Stream& rng);

/// CSV form: K lines of K decimal fields, '.' separator, no header.
PreferenceMatrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const PreferenceMatrix& q, const std::string& path);

struct Ballot {
  long count = 1;
  std::vector<int> ranking;  // candidate indices, best first, no duplicates
};

struct BallotSet {
  std::vector<std::string> candidates;
  std::vector<Ballot> ballots;
};

/// Ballot file: header "candidates: a,b,c" then lines "count: a>b>c".
/// Rankings may cover a subset of the candidates.
BallotSet load_ballots(const std::string& path);

/// q_ij = (weight of ballots putting i above j) / (weight of ballots ranking
/// at least one of i, j). A ranked candidate beats an unranked one; ballots
/// ranking neither are ignored for that pair; pairs no ballot can decide get
/// 0.5. With `top_n`, candidates are first restricted to the top_n by total
/// weighted pairwise wins (ties kept in listed order) and the matrix is built
/// on the restriction. `kept` receives the retained original indices.
PreferenceMatrix ballots_to_matrix(const BallotSet& ballots,
                                   std::optional<int> top_n = std::nullopt,
                                   std::vector<int>* kept = nullptr);

}  // namespace duelsim
