#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "duelsim/env.hpp"
#include "duelsim/graph.hpp"
#include "duelsim/netsim.hpp"
#include "duelsim/policies.hpp"
#include "duelsim/rng.hpp"

namespace duelsim {

/// Min-id flooding, one synchronous exchange per step. After diameter + 1
/// steps every player holds the global minimum id.
class ElectionState {
 public:
  ElectionState(const CommGraph& g, std::vector<long> ids);

  void step();
  int rounds_elapsed() const { return rounds_; }
  const std::vector<long>& current_ids() const { return current_; }
  const std::vector<long>& original_ids() const { return original_; }

 private:
  const CommGraph* graph_;
  std::vector<long> original_;
  std::vector<long> current_;
  std::vector<long> scratch_;
  int rounds_ = 0;
};

struct ElectionResult {
  int leader = 0;
  long rounds = 0;  // D + 1
};

ElectionResult elect_leader(const CommGraph& g, const DistanceTable& dist,
                            const std::vector<long>& ids);

struct PlayerDraw {
  int first = 0;
  int second = 0;
  int reward = 0;
};

enum class BaseAlgorithm { rucb, rmed2fh };

struct PolicyParams {
  double alpha = 3.0;
  double rmed_scale = 0.3;
  long horizon = 0;  // required by the fixed-horizon base policy
};

std::unique_ptr<BasePolicy> make_policy(BaseAlgorithm base, int arms,
                                        const PolicyParams& params);

/// One player repeatedly applying a base policy; the reference trajectory
/// that the multiplayer systems are measured against.
class SinglePlayerSystem {
 public:
  SinglePlayerSystem(const PreferenceMatrix& q, BaseAlgorithm base,
                     const PolicyParams& params, std::uint64_t run_seed);

  const std::vector<PlayerDraw>& step();
  long round() const { return t_; }
  const BasePolicy& policy() const { return *policy_; }

 private:
  PreferenceMatrix q_;
  std::unique_ptr<BasePolicy> policy_;
  Stream play_;
  long t_ = 0;
  std::vector<PlayerDraw> draws_;
};

/// Leader-follower orchestrator. During the election phase every player runs
/// its own base-policy instance; afterwards the elected leader keeps
/// exploring and announces its winner candidate whenever it changes (plus
/// once unconditionally right after election), while followers draw their
/// last received candidate twice and discard the reward. Announcements ride
/// a bus whose decay parameter equals the graph diameter.
class FylSystem {
 public:
  FylSystem(const PreferenceMatrix& q, const CommGraph& g, BaseAlgorithm base,
            const PolicyParams& params, const std::vector<long>& ids,
            std::uint64_t run_seed);

  const std::vector<PlayerDraw>& step();
  long round() const { return t_; }
  int leader() const { return leader_; }
  long election_rounds() const { return t_le_; }
  int follower_arm(int player) const { return follower_arm_[player]; }
  const BasePolicy& leader_policy() const { return *policies_[leader_]; }

 private:
  PreferenceMatrix q_;
  CommGraph graph_;
  DistanceTable dist_;
  MessageBus bus_;
  int leader_;
  long t_le_;
  long t_ = 0;
  int last_announced_ = -1;
  std::vector<std::unique_ptr<BasePolicy>> policies_;
  std::vector<Stream> play_;
  Stream candidate_stream_;
  std::vector<int> follower_arm_;
  std::vector<PlayerDraw> draws_;
};

struct MpOptions {
  double alpha = 3.0;
  bool recommendations = true;
};

/// Fully distributed orchestrator: every player runs the optimistic
/// selection rule on statistics shared over the bus, broadcasts each sample,
/// and treats received identical-pair draws as winner recommendations for
/// the next round.
class MpRucbSystem {
 public:
  MpRucbSystem(const PreferenceMatrix& q, const CommGraph& g, int gamma,
               const MpOptions& options, std::uint64_t run_seed);

  const std::vector<PlayerDraw>& step();
  long round() const { return t_; }
  int players() const { return static_cast<int>(stats_.size()); }

  const DuelStats& shared_stats(int player) const { return stats_[player]; }
  std::optional<int> candidate(int player) const { return candidate_[player]; }
  const std::vector<int>& recommended(int player) const {
    return recommended_[player];
  }
  /// Number of identical-pair draws that passed the inline index guard.
  long identical_draws_checked() const { return identical_checked_; }

 private:
  PreferenceMatrix q_;
  CommGraph graph_;
  DistanceTable dist_;
  MessageBus bus_;
  MpOptions options_;
  long t_ = 0;
  long identical_checked_ = 0;
  std::vector<DuelStats> stats_;  // one shared-win matrix per player
  std::vector<std::optional<int>> candidate_;
  std::vector<std::vector<int>> recommended_;
  std::vector<Stream> play_;
  std::vector<PlayerDraw> draws_;
  std::vector<double> ucb_scratch_;
};

}  // namespace duelsim
