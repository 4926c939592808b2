#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <variant>
#include <vector>

#include "fedforge/rng.hpp"
#include "fedforge/transport/transport.hpp"

namespace fedforge::transport {

// Metadata of a message that has been sent but not yet delivered.
struct InFlight {
  int src = 0;
  int dst = 0;
  std::uint64_t pair_seq = 0;    // index among messages src -> dst
  std::uint64_t global_seq = 0;  // index among all sends of the run
  std::uint8_t phase = 0;

  friend bool operator==(const InFlight&, const InFlight&) = default;
};

// One scripted delivery: the `pair_seq`-th message from src to dst.
struct ScriptStep {
  int src = 0;
  int dst = 0;
  std::uint64_t pair_seq = 0;
};

// Chooses which in-flight message is delivered next. Only the head of every
// (src, dst) queue is ever offered, so per-pair FIFO holds for every policy.
class DeliverySchedule {
 public:
  // Global send order.
  static DeliverySchedule fifo();
  // Uniformly random head, seeded.
  static DeliverySchedule random(std::uint64_t seed);
  // Any phase-2 head before any phase-1 head; ties broken randomly.
  static DeliverySchedule phase_two_first(std::uint64_t seed);
  // Explicit order, then FIFO once exhausted. Throws ScheduleError if the
  // steps of some pair are not 0, 1, 2, ... in order.
  static DeliverySchedule scripted(std::vector<ScriptStep> steps);

  // `heads` is ordered by (src, dst). Returns an index into it.
  std::size_t choose(std::span<const InFlight> heads);

 private:
  struct Fifo {};
  struct Random { SplitMix64 rng; };
  struct PhaseTwoFirst { SplitMix64 rng; };
  struct Scripted { std::vector<ScriptStep> steps; std::size_t next = 0; };

  explicit DeliverySchedule(std::variant<Fifo, Random, PhaseTwoFirst, Scripted> p)
      : policy_(std::move(p)) {}

  std::variant<Fifo, Random, PhaseTwoFirst, Scripted> policy_;
};

// In-memory network of `no_nodes` endpoints. Deliveries happen only when
// every node is blocked in recv() or finished, one message at a time, so a
// run is fully determined by its inputs and the schedule.
class SimNetwork {
 public:
  SimNetwork(int no_nodes, DeliverySchedule schedule);
  ~SimNetwork();

  SimNetwork(const SimNetwork&) = delete;
  SimNetwork& operator=(const SimNetwork&) = delete;

  int num_nodes() const { return no_nodes_; }

  // Runs body(node_id, endpoint) on one thread per node and drives delivery
  // until all bodies return. Returns one exception slot per node. If every
  // live node is blocked and nothing is in flight, blocked recv() calls throw
  // TransportClosedError.
  std::vector<std::exception_ptr> run(
      const std::function<void(int, Transport&)>& body);

  // Same, rethrowing the exception of the lowest failing node.
  void run_or_throw(const std::function<void(int, Transport&)>& body);

  const std::vector<InFlight>& delivery_log() const { return log_; }
  TransportStats node_stats(int id) const;
  TransportStats total_stats() const;

 private:
  class Endpoint;
  enum class Status { kRunning, kWaiting, kFinished };

  void send(int src, int dst, const Message& msg);
  Message recv(int id);
  void finish(int id);
  void schedule_loop();

  int no_nodes_;
  DeliverySchedule schedule_;
  std::vector<std::unique_ptr<Endpoint>> endpoints_;

  mutable std::mutex mu_;
  std::condition_variable cv_;
  struct Pending { InFlight meta; Message msg; };
  std::vector<std::deque<Pending>> pairs_;  // src * n + dst
  std::vector<std::uint64_t> pair_counters_;
  std::uint64_t global_counter_ = 0;
  std::vector<std::deque<Message>> inboxes_;
  std::vector<Status> status_;
  std::vector<TransportStats> stats_;
  int active_ = 0;
  bool closed_ = false;
  bool running_ = false;
  std::vector<InFlight> log_;
};

inline std::unique_ptr<SimNetwork> sim_transport(int no_nodes,
                                                 DeliverySchedule schedule) {
  return std::make_unique<SimNetwork>(no_nodes, std::move(schedule));
}

}  // namespace fedforge::transport
