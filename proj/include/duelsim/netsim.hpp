#pragma once

#include <map>
#include <variant>
#include <vector>

#include "duelsim/errors.hpp"
#include "duelsim/graph.hpp"

namespace duelsim {

/// One drawn pair and its reward, as shared between players.
struct DuelSample {
  int player = 0;
  long round = 0;
  int first = 0;
  int second = 0;
  int reward = 0;
};

/// A winner-candidate announcement (used by the leader-based algorithm).
struct Announcement {
  int arm = 0;
};

struct Envelope {
  int origin = 0;
  long created = 0;
  std::variant<DuelSample, Announcement> body;
};

/// Round-synchronous message transport with decay parameter gamma.
///
/// A payload broadcast by `origin` at round t reaches every player m with
/// 1 <= d(origin, m) <= gamma, and is handed over by collect(m, t + d - 1),
/// i.e. during that round's communication phase; decisions can first use it
/// one round later. Players never receive their own broadcasts. gamma = 0
/// disables communication entirely.
class MessageBus {
 public:
  MessageBus(const DistanceTable& dist, int gamma);

  int gamma() const { return gamma_; }

  void broadcast(int origin, long round,
                 std::variant<DuelSample, Announcement> body);

  /// Returns every envelope due at (recipient, round), ordered by origin
  /// index then creation round. Must be called once per recipient per round,
  /// after the round's broadcasts; a second call raises DoubleCollectError.
  std::vector<Envelope> collect(int recipient, long round);

 private:
  DistanceTable dist_;
  int gamma_;
  std::vector<std::map<long, std::vector<Envelope>>> timetable_;  // per recipient
  std::vector<long> last_collect_;
};

}  // namespace duelsim
