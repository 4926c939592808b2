#pragma once

#include <vector>

#include "fedforge/types.hpp"

namespace fedforge::engine {

// Protocol phase of a node within one decentralized iteration.
enum class Phase : int {
  kBroadcast = 1,  // acting as server: send local data to every peer
  kClient = 2,     // acting as client: answer every peer's phase-1 message
  kAggregate = 3,  // acting as server: collect replies and aggregate
};

enum class Disposition {
  kProcessAsClient,   // phase-1 message of this round: call the client callback
  kBuffer,            // phase-2 message that arrived during phase 2
  kProcessAsUpdate,   // phase-2 message consumed in phase 3
  kDeferToNextRound,  // a peer's phase-1 message for the following round
};

// Bookkeeping for one decentralized round at one node: classifies every
// incoming message and rejects duplicates.
//
// A peer that has finished round r may already broadcast its round r+1
// phase-1 message while this node is still in round r. Per-pair FIFO makes
// a second phase-1 message from the same peer unambiguous: it belongs to
// the next round. Only when no next round exists, or a third one shows up,
// is it a duplicate.
class RoundTracker {
 public:
  RoundTracker(int self, int no_nodes, bool last_round);

  // Throws ProtocolError for an invalid source, a phase outside {1, 2}, or a
  // duplicate.
  Disposition handle_incoming(const Message& msg, Phase current);

  int phase1_processed() const { return phase1_count_; }
  int updates_received() const { return update_count_; }
  bool client_duty_done() const { return phase1_count_ == no_nodes_ - 1; }
  bool all_updates_in() const { return update_count_ == no_nodes_ - 1; }

 private:
  int self_;
  int no_nodes_;
  bool last_round_;
  std::vector<bool> phase1_seen_;
  std::vector<bool> next_phase1_seen_;
  std::vector<bool> update_seen_;
  int phase1_count_ = 0;
  int update_count_ = 0;
};

}  // namespace fedforge::engine
