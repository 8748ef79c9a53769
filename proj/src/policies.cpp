#include "duelsim/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "duelsim/theory.hpp"

namespace duelsim {

DuelStats::DuelStats(int arms) : k_(arms) {
  if (arms < 1) throw std::invalid_argument("DuelStats needs at least 1 arm");
  w_.assign(static_cast<std::size_t>(k_) * k_, 0);
}

void DuelStats::record(int i, int j, int r) {
  if (i < 0 || j < 0 || i >= k_ || j >= k_ || (r != 0 && r != 1)) {
    throw std::invalid_argument("bad duel record");
  }
  if (r == 1) {
    ++w_[idx(i, j)];
  } else {
    ++w_[idx(j, i)];
  }
  ++total_;
}

double ucb_index(long wins, long visits, long t, double alpha) {
  const double mean = visits == 0 ? 1.0 : static_cast<double>(wins) / visits;
  const double bonus =
      visits == 0 ? 1.0 : alpha * std::log(static_cast<double>(t)) / visits;
  return mean + std::sqrt(bonus);
}

void fill_ucb(const DuelStats& stats, long t, double alpha,
              std::vector<double>& out) {
  const int k = stats.arms();
  out.assign(static_cast<std::size_t>(k) * k, 0.5);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      out[static_cast<std::size_t>(i) * k + j] =
          ucb_index(stats.wins(i, j), stats.visits(i, j), t, alpha);
    }
  }
}

double empirical_divergence(const DuelStats& stats, int arm) {
  double total = 0.0;
  for (int j = 0; j < stats.arms(); ++j) {
    if (j == arm) continue;
    const double mean = stats.mean(arm, j);
    if (mean <= 0.5) {
      total += stats.visits(arm, j) * kl_bernoulli(mean, 0.5);
    }
  }
  return total;
}

RucbChoice rucb_choose(const std::vector<double>& ucb, int arms,
                       std::optional<int> candidate,
                       const std::vector<int>& recommended, Stream& rng) {
  const auto u = [&](int i, int j) {
    return ucb[static_cast<std::size_t>(i) * arms + j];
  };

  std::vector<int> champions;
  std::vector<char> is_champion(arms, 0);
  for (int i = 0; i < arms; ++i) {
    bool ok = true;
    for (int j = 0; j < arms && ok; ++j) {
      if (u(i, j) < 0.5) ok = false;
    }
    if (ok) {
      champions.push_back(i);
      is_champion[i] = 1;
    }
  }

  if (candidate && !is_champion[*candidate]) candidate.reset();
  if (champions.size() == 1) candidate = champions.front();
  if (!recommended.empty()) {
    std::vector<int> endorsed;
    for (int r : recommended) {
      if (is_champion[r]) endorsed.push_back(r);
    }
    if (!endorsed.empty()) candidate = rng.pick(endorsed);
  }

  RucbChoice out;
  out.candidate = candidate;
  out.champions_empty = champions.empty();
  if (champions.empty()) {
    out.first = static_cast<int>(rng.uniform(arms));
  } else if (candidate) {
    out.first = *candidate;  // the candidate is always kept inside the champions
  } else {
    out.first = rng.pick(champions);
  }

  double best = -std::numeric_limits<double>::infinity();
  double best_other = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < arms; ++j) {
    const double v = u(j, out.first);
    best = std::max(best, v);
    if (j != out.first) best_other = std::max(best_other, v);
  }
  out.max_other_index = best_other;

  std::vector<int> maximizers;
  for (int j = 0; j < arms; ++j) {
    if (u(j, out.first) == best && j != out.first) maximizers.push_back(j);
  }
  out.second = maximizers.empty() ? out.first : rng.pick(maximizers);
  return out;
}

RucbPolicy::RucbPolicy(int arms, double alpha)
    : stats_(arms), alpha_(alpha) {
  if (!(alpha > 1.0)) throw BadAlphaError("rucb needs alpha > 1");
}

std::pair<int, int> RucbPolicy::select_pair(long t, Stream& rng) {
  fill_ucb(stats_, t, alpha_, ucb_);
  const RucbChoice choice = rucb_choose(ucb_, stats_.arms(), best_, {}, rng);
  best_ = choice.candidate;
  return {choice.first, choice.second};
}

int RucbPolicy::cw_candidate(Stream& rng) const {
  if (best_) return *best_;
  return static_cast<int>(rng.uniform(stats_.arms()));
}

void RucbPolicy::observe(int i, int j, int r) { stats_.record(i, j, r); }

namespace {

long initial_passes(long horizon) {
  const double loglog = std::log(std::log(static_cast<double>(std::max(horizon, 3L))));
  return std::max(1L, static_cast<long>(std::ceil(loglog)));
}

}  // namespace

Rmed2fhPolicy::Rmed2fhPolicy(int arms, long horizon, double scale)
    : stats_(arms), horizon_(horizon) {
  if (horizon < 1) throw std::invalid_argument("rmed2fh needs a horizon");
  if (!(scale > 0.0)) throw std::invalid_argument("budget scale must be positive");
  budget_ = scale * std::pow(static_cast<double>(arms), 1.01);
  init_passes_ = initial_passes(horizon);
  guard_period_ = static_cast<int>(std::max(2L, init_passes_));
  for (int i = 0; i < arms; ++i) {
    for (int j = i + 1; j < arms; ++j) init_pairs_.emplace_back(i, j);
  }
  init_total_ = static_cast<long>(init_pairs_.size()) * init_passes_;
  fixed_opponent_.assign(arms, 0);
  serve_count_.assign(arms, 0);
  queued_.assign(arms, 0);
}

int Rmed2fhPolicy::divergence_minimizer() const {
  int best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (int i = 0; i < stats_.arms(); ++i) {
    const double v = empirical_divergence(stats_, i);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

std::vector<int> Rmed2fhPolicy::empirical_superiors(int arm) const {
  std::vector<int> out;
  for (int j = 0; j < stats_.arms(); ++j) {
    if (j != arm && stats_.mean(arm, j) <= 0.5) out.push_back(j);
  }
  return out;
}

void Rmed2fhPolicy::freeze_opponents() {
  const int reference = divergence_minimizer();
  for (int arm = 0; arm < stats_.arms(); ++arm) {
    int best = reference;
    double best_rate = std::numeric_limits<double>::infinity();
    for (int j = 0; j < stats_.arms(); ++j) {
      if (j == arm) continue;
      const double mean = stats_.mean(arm, j);
      if (mean >= 0.5) continue;
      const double gaps = std::max(0.0, stats_.mean(reference, arm) - 0.5) +
                          std::max(0.0, stats_.mean(reference, j) - 0.5);
      const double rate = gaps / (2.0 * kl_bernoulli(mean, 0.5));
      if (rate < best_rate) {
        best_rate = rate;
        best = j;
      }
    }
    fixed_opponent_[arm] = best;
  }
}

int Rmed2fhPolicy::opponent_for(int arm) const {
  const int minimizer = divergence_minimizer();
  const std::vector<int> superiors = empirical_superiors(arm);
  if (superiors.empty()) return arm == minimizer ? arm : minimizer;
  const auto beats = [&](int j) {
    return std::find(superiors.begin(), superiors.end(), j) != superiors.end();
  };
  // Periodic comparison against the current minimizer guards a badly frozen
  // opponent estimate.
  if (serve_count_[arm] % guard_period_ == 0 && arm != minimizer &&
      beats(minimizer)) {
    return minimizer;
  }
  const int frozen = fixed_opponent_[arm];
  if (frozen != arm && beats(frozen)) return frozen;
  if (arm != minimizer && beats(minimizer)) return minimizer;
  return superiors.front();
}

std::pair<int, int> Rmed2fhPolicy::select_pair(long t, Stream& rng) {
  (void)t;
  (void)rng;  // fully deterministic given the observed history
  if (in_initial_phase()) {
    return init_pairs_[init_pos_ % init_pairs_.size()];
  }
  const int arm = current_loop_.front();
  return {arm, opponent_for(arm)};
}

int Rmed2fhPolicy::cw_candidate(Stream& rng) const {
  (void)rng;
  return divergence_minimizer();
}

void Rmed2fhPolicy::observe(int i, int j, int r) {
  stats_.record(i, j, r);
  ++rounds_seen_;

  if (in_initial_phase()) {
    ++init_pos_;
    if (!in_initial_phase()) {
      freeze_opponents();
      for (int arm = 0; arm < stats_.arms(); ++arm) current_loop_.push_back(arm);
    }
    return;
  }

  const int served = current_loop_.front();
  current_loop_.erase(current_loop_.begin());
  ++serve_count_[served];

  double floor = std::numeric_limits<double>::infinity();
  std::vector<double> divergence(stats_.arms());
  for (int a = 0; a < stats_.arms(); ++a) {
    divergence[a] = empirical_divergence(stats_, a);
    floor = std::min(floor, divergence[a]);
  }
  const double allowance = std::log(static_cast<double>(rounds_seen_)) + budget_;
  for (int a = 0; a < stats_.arms(); ++a) {
    if (!queued_[a] && divergence[a] - floor <= allowance) {
      queued_[a] = 1;
      ++queued_count_;
    }
  }
  if (current_loop_.empty()) {
    for (int a = 0; a < stats_.arms(); ++a) {
      if (queued_[a]) current_loop_.push_back(a);
      queued_[a] = 0;
    }
    queued_count_ = 0;
  }
}

}  // namespace duelsim
