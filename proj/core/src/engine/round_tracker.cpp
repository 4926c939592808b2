#include "fedforge/engine/round_tracker.hpp"

#include <string>

#include "fedforge/errors.hpp"

namespace fedforge::engine {

RoundTracker::RoundTracker(int self, int no_nodes, bool last_round)
    : self_(self),
      no_nodes_(no_nodes),
      last_round_(last_round),
      phase1_seen_(static_cast<std::size_t>(no_nodes), false),
      next_phase1_seen_(static_cast<std::size_t>(no_nodes), false),
      update_seen_(static_cast<std::size_t>(no_nodes), false) {}

Disposition RoundTracker::handle_incoming(const Message& msg, Phase current) {
  const int src = msg.src;
  if (src >= no_nodes_ || src == self_) {
    throw ProtocolError("message from invalid source " + std::to_string(src));
  }
  const auto s = static_cast<std::size_t>(src);
  if (current == Phase::kBroadcast) {
    throw ProtocolError("no message is consumed during phase 1");
  }

  if (msg.phase == 1) {
    if (!phase1_seen_[s]) {
      // Phase 2 ends only after every peer's phase-1 message was answered.
      if (current == Phase::kAggregate) {
        throw ProtocolError("phase-1 message from node " + std::to_string(src) +
                            " was not answered during phase 2");
      }
      phase1_seen_[s] = true;
      ++phase1_count_;
      return Disposition::kProcessAsClient;
    }
    if (last_round_ || next_phase1_seen_[s]) {
      throw ProtocolError("duplicate phase-1 message from node " + std::to_string(src));
    }
    next_phase1_seen_[s] = true;
    return Disposition::kDeferToNextRound;
  }

  if (msg.phase == 2) {
    if (update_seen_[s]) {
      throw ProtocolError("duplicate phase-2 message from node " + std::to_string(src));
    }
    update_seen_[s] = true;
    ++update_count_;
    return current == Phase::kClient ? Disposition::kBuffer
                                     : Disposition::kProcessAsUpdate;
  }

  throw ProtocolError("message phase must be 1 or 2, got " + std::to_string(msg.phase));
}

}  // namespace fedforge::engine
