#include "duelsim/multiplayer.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace duelsim {

ElectionState::ElectionState(const CommGraph& g, std::vector<long> ids)
    : graph_(&g), original_(std::move(ids)) {
  if (static_cast<int>(original_.size()) != g.players()) {
    throw InvalidSizeError("one id per player required");
  }
  std::set<long> unique(original_.begin(), original_.end());
  if (static_cast<int>(unique.size()) != g.players()) {
    throw InvalidSizeError("player ids must be unique");
  }
  current_ = original_;
  scratch_ = original_;
}

void ElectionState::step() {
  for (int m = 0; m < graph_->players(); ++m) {
    long best = current_[m];
    for (int n : graph_->neighbors(m)) best = std::min(best, current_[n]);
    scratch_[m] = best;
  }
  current_.swap(scratch_);
  ++rounds_;
}

ElectionResult elect_leader(const CommGraph& g, const DistanceTable& dist,
                            const std::vector<long>& ids) {
  ElectionState state(g, ids);
  const long t_le = dist.diameter() + 1;
  for (long r = 0; r < t_le; ++r) state.step();
  const long minimum =
      *std::min_element(state.original_ids().begin(), state.original_ids().end());
  int leader = -1;
  for (int m = 0; m < g.players(); ++m) {
    if (state.current_ids()[m] != minimum) {
      throw std::logic_error("min-flooding did not converge in D+1 rounds");
    }
    if (state.original_ids()[m] == minimum) leader = m;
  }
  return ElectionResult{leader, t_le};
}

std::unique_ptr<BasePolicy> make_policy(BaseAlgorithm base, int arms,
                                        const PolicyParams& params) {
  switch (base) {
    case BaseAlgorithm::rucb:
      return std::make_unique<RucbPolicy>(arms, params.alpha);
    case BaseAlgorithm::rmed2fh:
      return std::make_unique<Rmed2fhPolicy>(arms, params.horizon,
                                             params.rmed_scale);
  }
  throw std::logic_error("unknown base algorithm");
}

SinglePlayerSystem::SinglePlayerSystem(const PreferenceMatrix& q,
                                       BaseAlgorithm base,
                                       const PolicyParams& params,
                                       std::uint64_t run_seed)
    : q_(q),
      policy_(make_policy(base, q.arms(), params)),
      play_(make_stream(run_seed, 0, StreamRole::play)),
      draws_(1) {}

const std::vector<PlayerDraw>& SinglePlayerSystem::step() {
  ++t_;
  const auto [i, j] = policy_->select_pair(t_, play_);
  const int r = sample_duel(q_, i, j, play_);
  policy_->observe(i, j, r);
  draws_[0] = PlayerDraw{i, j, r};
  return draws_;
}

FylSystem::FylSystem(const PreferenceMatrix& q, const CommGraph& g,
                     BaseAlgorithm base, const PolicyParams& params,
                     const std::vector<long>& ids, std::uint64_t run_seed)
    : q_(q),
      graph_(g),
      dist_(DistanceTable::bfs(g)),
      bus_(dist_, dist_.diameter()),
      leader_(0),
      t_le_(0),
      follower_arm_(g.players(), 0),
      draws_(g.players()) {
  const ElectionResult election = elect_leader(graph_, dist_, ids);
  leader_ = election.leader;
  t_le_ = election.rounds;
  for (int m = 0; m < graph_.players(); ++m) {
    policies_.push_back(make_policy(base, q_.arms(), params));
    play_.push_back(make_stream(run_seed, m, StreamRole::play));
  }
  candidate_stream_ = make_stream(run_seed, leader_, StreamRole::candidate);
}

const std::vector<PlayerDraw>& FylSystem::step() {
  ++t_;
  if (t_ <= t_le_) {
    // Election phase: everyone explores with its own base-policy instance.
    for (int m = 0; m < graph_.players(); ++m) {
      const auto [i, j] = policies_[m]->select_pair(t_, play_[m]);
      const int r = sample_duel(q_, i, j, play_[m]);
      policies_[m]->observe(i, j, r);
      draws_[m] = PlayerDraw{i, j, r};
    }
    if (t_ == t_le_) {
      // Followers switch to pure exploitation; their statistics are dropped.
      for (int m = 0; m < graph_.players(); ++m) {
        if (m != leader_) policies_[m].reset();
      }
    }
  } else {
    const auto [i, j] = policies_[leader_]->select_pair(t_, play_[leader_]);
    const int r = sample_duel(q_, i, j, play_[leader_]);
    policies_[leader_]->observe(i, j, r);
    draws_[leader_] = PlayerDraw{i, j, r};
    const int cw = policies_[leader_]->cw_candidate(candidate_stream_);
    if (cw != last_announced_) {
      bus_.broadcast(leader_, t_, Announcement{cw});
      last_announced_ = cw;
    }
    for (int m = 0; m < graph_.players(); ++m) {
      if (m == leader_) continue;
      const int arm = follower_arm_[m];
      const int reward = sample_duel(q_, arm, arm, play_[m]);
      draws_[m] = PlayerDraw{arm, arm, reward};  // reward is discarded
    }
  }

  for (int m = 0; m < graph_.players(); ++m) {
    const std::vector<Envelope> delivered = bus_.collect(m, t_);
    if (m == leader_) continue;
    long newest = -1;
    for (const Envelope& env : delivered) {
      if (const auto* note = std::get_if<Announcement>(&env.body)) {
        if (env.created > newest) {
          newest = env.created;
          follower_arm_[m] = note->arm;
        }
      }
    }
  }
  return draws_;
}

MpRucbSystem::MpRucbSystem(const PreferenceMatrix& q, const CommGraph& g,
                           int gamma, const MpOptions& options,
                           std::uint64_t run_seed)
    : q_(q),
      graph_(g),
      dist_(DistanceTable::bfs(g)),
      bus_(dist_, gamma),
      options_(options) {
  if (!(options_.alpha > 1.0)) throw BadAlphaError("needs alpha > 1");
  for (int m = 0; m < graph_.players(); ++m) {
    stats_.emplace_back(q_.arms());
    candidate_.emplace_back();
    recommended_.emplace_back();
    play_.push_back(make_stream(run_seed, m, StreamRole::play));
  }
  draws_.resize(graph_.players());
}

const std::vector<PlayerDraw>& MpRucbSystem::step() {
  ++t_;
  static const std::vector<int> kNoRecommendations;

  // Decision phase. Indices come from each player's own end-of-last-round
  // statistics, so the in-loop player order cannot leak information.
  for (int m = 0; m < graph_.players(); ++m) {
    fill_ucb(stats_[m], t_, options_.alpha, ucb_scratch_);
    const std::vector<int>& recs =
        options_.recommendations ? recommended_[m] : kNoRecommendations;
    const RucbChoice choice =
        rucb_choose(ucb_scratch_, q_.arms(), candidate_[m], recs, play_[m]);
    candidate_[m] = choice.candidate;
    if (choice.first == choice.second) {
      if (choice.max_other_index > 0.5) {
        throw std::logic_error(
            "identical-pair draw while another arm still scores above 0.5");
      }
      ++identical_checked_;
    }
    const int r = sample_duel(q_, choice.first, choice.second, play_[m]);
    stats_[m].record(choice.first, choice.second, r);
    bus_.broadcast(m, t_, DuelSample{m, t_, choice.first, choice.second, r});
    draws_[m] = PlayerDraw{choice.first, choice.second, r};
  }

  // Communication phase. Folds every delivered sample and rebuilds the
  // recommendation set from this round's deliveries alone.
  for (int m = 0; m < graph_.players(); ++m) {
    const std::vector<Envelope> delivered = bus_.collect(m, t_);
    recommended_[m].clear();
    for (const Envelope& env : delivered) {
      const auto& sample = std::get<DuelSample>(env.body);
      stats_[m].record(sample.first, sample.second, sample.reward);
      if (options_.recommendations && sample.first == sample.second) {
        recommended_[m].push_back(sample.first);
      }
    }
    std::sort(recommended_[m].begin(), recommended_[m].end());
    recommended_[m].erase(
        std::unique(recommended_[m].begin(), recommended_[m].end()),
        recommended_[m].end());
  }
  return draws_;
}

}  // namespace duelsim
