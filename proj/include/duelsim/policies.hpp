#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "duelsim/rng.hpp"

namespace duelsim {

/// Ordered duel-win counters for one statistics holder. wins(i,j) counts
/// victories of i over j; visits and empirical means are derived, with the
/// x/0 = 1 convention on means.
class DuelStats {
 public:
  explicit DuelStats(int arms);

  int arms() const { return k_; }
  long wins(int i, int j) const { return w_[idx(i, j)]; }
  long visits(int i, int j) const { return w_[idx(i, j)] + w_[idx(j, i)]; }

  double mean(int i, int j) const {
    const long n = visits(i, j);
    return n == 0 ? 1.0 : static_cast<double>(wins(i, j)) / n;
  }

  /// Folds one duel outcome: r = 1 means i beat j.
  void record(int i, int j, int r);

  long total() const { return total_; }

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * k_ + j;
  }

  int k_;
  long total_ = 0;
  std::vector<long> w_;
};

/// Optimistic index w/n + sqrt(alpha ln t / n); each quotient with a zero
/// denominator evaluates to 1.
double ucb_index(long wins, long visits, long t, double alpha);

/// Fills a K x K optimistic index matrix (row-major); diagonal fixed at 0.5.
void fill_ucb(const DuelStats& stats, long t, double alpha,
              std::vector<double>& out);

/// Evidence against arm i being the overall winner: sum over opponents with
/// empirical mean <= 1/2 of visits * KL(mean, 1/2). Zero if nothing beats i.
double empirical_divergence(const DuelStats& stats, int arm);

struct RucbChoice {
  int first = 0;
  int second = 0;
  std::optional<int> candidate;   // updated hypothesized-best arm
  bool champions_empty = false;
  double max_other_index = 0.0;   // max over j != first of u(j, first)
};

/// The optimistic selection rule shared by the single-player policy and the
/// message-passing engine. `ucb` is a row-major K x K index matrix with 0.5
/// on the diagonal; `recommended` (sorted, possibly empty) is intersected
/// with the champion set to refresh the candidate. Random draws, in order:
/// candidate pick from the recommendation intersection, first-arm pick
/// (uniform over all arms when no champion exists, else uniform over the
/// champions), opponent tie-break. Uniform picks from singletons consume no
/// randomness.
RucbChoice rucb_choose(const std::vector<double>& ucb, int arms,
                       std::optional<int> candidate,
                       const std::vector<int>& recommended, Stream& rng);

/// Single-player base algorithm: a pair to draw, a winner candidate, and an
/// update hook. select_pair may advance internal bookkeeping but never the
/// duel statistics; observe is the only statistics mutator.
class BasePolicy {
 public:
  virtual ~BasePolicy() = default;
  virtual std::pair<int, int> select_pair(long t, Stream& rng) = 0;
  virtual int cw_candidate(Stream& rng) const = 0;
  virtual void observe(int i, int j, int r) = 0;
  virtual const DuelStats& stats() const = 0;
};

/// Optimistic pairwise-index policy (the message-passing engine restricted
/// to one player). The candidate is the hypothesized best arm when one
/// exists, otherwise a uniformly random arm.
class RucbPolicy : public BasePolicy {
 public:
  RucbPolicy(int arms, double alpha);

  std::pair<int, int> select_pair(long t, Stream& rng) override;
  int cw_candidate(Stream& rng) const override;
  void observe(int i, int j, int r) override;
  const DuelStats& stats() const override { return stats_; }

  std::optional<int> hypothesized_best() const { return best_; }
  double alpha() const { return alpha_; }

 private:
  DuelStats stats_;
  double alpha_;
  std::optional<int> best_;
  std::vector<double> ucb_;
};

/// Fixed-horizon empirical-divergence policy. Runs an initial phase that
/// duels every pair ceil(max(1, ln ln T)) times, freezes a per-arm opponent
/// from the plug-in of the lower-bound minimizer, then serves arms whose
/// divergence deficit stays below ln t + f(K), f(K) = scale * K^1.01. The
/// winner candidate is the divergence minimizer (lowest index on ties).
class Rmed2fhPolicy : public BasePolicy {
 public:
  Rmed2fhPolicy(int arms, long horizon, double scale = 0.3);

  std::pair<int, int> select_pair(long t, Stream& rng) override;
  int cw_candidate(Stream& rng) const override;
  void observe(int i, int j, int r) override;
  const DuelStats& stats() const override { return stats_; }

  bool in_initial_phase() const { return init_pos_ < init_total_; }
  double exploration_budget() const { return budget_; }

 private:
  int divergence_minimizer() const;
  std::vector<int> empirical_superiors(int arm) const;
  void freeze_opponents();
  int opponent_for(int arm) const;

  DuelStats stats_;
  long horizon_;
  double budget_;        // f(K)
  int guard_period_;     // every n-th serve of an arm duels the minimizer
  long rounds_seen_ = 0;

  std::vector<std::pair<int, int>> init_pairs_;
  long init_passes_;
  long init_total_;
  long init_pos_ = 0;

  std::vector<int> fixed_opponent_;
  std::vector<long> serve_count_;
  std::vector<int> current_loop_;  // arms still to serve this loop, ascending
  std::vector<char> queued_;       // queued for the next loop
  int queued_count_ = 0;
};

}  // namespace duelsim
