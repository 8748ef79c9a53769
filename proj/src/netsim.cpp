#include "duelsim/netsim.hpp"

#include <algorithm>

namespace duelsim {

MessageBus::MessageBus(const DistanceTable& dist, int gamma)
    : dist_(dist), gamma_(gamma) {
  if (gamma_ < 0) throw InvalidSizeError("gamma must be >= 0");
  timetable_.resize(dist_.players());
  last_collect_.assign(dist_.players(), 0);
}

void MessageBus::broadcast(int origin, long round,
                           std::variant<DuelSample, Announcement> body) {
  if (round < 1) throw InvalidSizeError("rounds start at 1");
  if (gamma_ == 0) return;
  Envelope env{origin, round, std::move(body)};
  for (int m = 0; m < dist_.players(); ++m) {
    const int d = dist_.dist(origin, m);
    if (d < 1 || d > gamma_) continue;  // self and out-of-reach players
    timetable_[m][round + d - 1].push_back(env);
  }
}

std::vector<Envelope> MessageBus::collect(int recipient, long round) {
  if (round < 1) throw InvalidSizeError("rounds start at 1");
  if (last_collect_[recipient] == round) {
    throw DoubleCollectError("collect called twice for player " +
                             std::to_string(recipient) + " at round " +
                             std::to_string(round));
  }
  last_collect_[recipient] = round;
  auto& schedule = timetable_[recipient];
  const auto slot = schedule.find(round);
  if (slot == schedule.end()) return {};
  std::vector<Envelope> due = std::move(slot->second);
  schedule.erase(slot);
  std::stable_sort(due.begin(), due.end(),
                   [](const Envelope& a, const Envelope& b) {
                     if (a.origin != b.origin) return a.origin < b.origin;
                     return a.created < b.created;
                   });
  return due;
}

}  // namespace duelsim
