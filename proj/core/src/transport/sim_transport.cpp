#include "fedforge/transport/sim_transport.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <thread>
#include <utility>

#include "fedforge/errors.hpp"

namespace fedforge::transport {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t fifo_index(std::span<const InFlight> heads) {
  auto it = std::min_element(heads.begin(), heads.end(),
                             [](const InFlight& a, const InFlight& b) {
                               return a.global_seq < b.global_seq;
                             });
  return static_cast<std::size_t>(it - heads.begin());
}

}  // namespace

DeliverySchedule DeliverySchedule::fifo() { return DeliverySchedule(Fifo{}); }

DeliverySchedule DeliverySchedule::random(std::uint64_t seed) {
  return DeliverySchedule(Random{SplitMix64(seed)});
}

DeliverySchedule DeliverySchedule::phase_two_first(std::uint64_t seed) {
  return DeliverySchedule(PhaseTwoFirst{SplitMix64(seed)});
}

DeliverySchedule DeliverySchedule::scripted(std::vector<ScriptStep> steps) {
  std::map<std::pair<int, int>, std::uint64_t> expected;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    if (s.src < 0 || s.dst < 0 || s.src == s.dst) {
      throw ScheduleError("scripted step " + std::to_string(i) +
                          " has an invalid (src, dst) pair");
    }
    auto& want = expected[{s.src, s.dst}];
    if (s.pair_seq != want) {
      throw ScheduleError("scripted step " + std::to_string(i) + " delivers message " +
                          std::to_string(s.pair_seq) + " of pair (" +
                          std::to_string(s.src) + ", " + std::to_string(s.dst) +
                          ") before message " + std::to_string(want) +
                          ": violates per-pair FIFO");
    }
    ++want;
  }
  return DeliverySchedule(Scripted{std::move(steps), 0});
}

std::size_t DeliverySchedule::choose(std::span<const InFlight> heads) {
  return std::visit(
      Overloaded{
          [&](Fifo&) { return fifo_index(heads); },
          [&](Random& r) {
            return static_cast<std::size_t>(r.rng.next_below(heads.size()));
          },
          [&](PhaseTwoFirst& r) {
            std::vector<std::size_t> twos;
            for (std::size_t i = 0; i < heads.size(); ++i) {
              if (heads[i].phase == 2) twos.push_back(i);
            }
            if (twos.empty()) {
              return static_cast<std::size_t>(r.rng.next_below(heads.size()));
            }
            return twos[r.rng.next_below(twos.size())];
          },
          [&](Scripted& s) {
            if (s.next >= s.steps.size()) return fifo_index(heads);
            const ScriptStep& step = s.steps[s.next];
            for (std::size_t i = 0; i < heads.size(); ++i) {
              if (heads[i].src == step.src && heads[i].dst == step.dst &&
                  heads[i].pair_seq == step.pair_seq) {
                ++s.next;
                return i;
              }
            }
            throw ScheduleError("scripted step " + std::to_string(s.next) +
                                " is not deliverable: message not in flight");
          },
      },
      policy_);
}

class SimNetwork::Endpoint final : public Transport {
 public:
  Endpoint(SimNetwork& net, int id) : net_(net), id_(id) {}

  int node_id() const override { return id_; }
  int num_nodes() const override { return net_.no_nodes_; }
  void send(int dst, const Message& msg) override {
    if (dst < 0 || dst >= net_.no_nodes_ || dst == id_) {
      throw TransportError("invalid destination " + std::to_string(dst));
    }
    if (msg.src != id_) {
      throw TransportError("message src does not match the sending node");
    }
    net_.send(id_, dst, msg);
  }
  Message recv() override { return net_.recv(id_); }
  TransportStats stats() const override { return net_.node_stats(id_); }

 private:
  SimNetwork& net_;
  int id_;
};

SimNetwork::SimNetwork(int no_nodes, DeliverySchedule schedule)
    : no_nodes_(no_nodes),
      schedule_(std::move(schedule)),
      pairs_(static_cast<std::size_t>(no_nodes * no_nodes)),
      pair_counters_(static_cast<std::size_t>(no_nodes * no_nodes), 0),
      inboxes_(static_cast<std::size_t>(no_nodes)),
      status_(static_cast<std::size_t>(no_nodes), Status::kFinished),
      stats_(static_cast<std::size_t>(no_nodes)) {
  if (no_nodes < 1) throw UsageError("simulated network needs at least one node");
  for (int i = 0; i < no_nodes; ++i) {
    endpoints_.push_back(std::make_unique<Endpoint>(*this, i));
  }
}

SimNetwork::~SimNetwork() = default;

void SimNetwork::send(int src, int dst, const Message& msg) {
  std::lock_guard lock(mu_);
  const auto pair = static_cast<std::size_t>(src * no_nodes_ + dst);
  InFlight meta{src, dst, pair_counters_[pair]++, global_counter_++, msg.phase};
  pairs_[pair].push_back({meta, msg});
  ++stats_[static_cast<std::size_t>(src)].data_sent;
}

Message SimNetwork::recv(int id) {
  std::unique_lock lock(mu_);
  auto& inbox = inboxes_[static_cast<std::size_t>(id)];
  auto& status = status_[static_cast<std::size_t>(id)];
  if (inbox.empty()) {
    status = Status::kWaiting;
    --active_;
    cv_.notify_all();
    cv_.wait(lock, [&] { return !inbox.empty() || closed_; });
    // The scheduler flips us back to running when it delivers; on close we
    // do it ourselves.
    if (status == Status::kWaiting) {
      status = Status::kRunning;
      ++active_;
    }
  }
  if (inbox.empty()) {
    throw TransportClosedError("simulated network is quiescent with nothing in flight");
  }
  Message msg = std::move(inbox.front());
  inbox.pop_front();
  ++stats_[static_cast<std::size_t>(id)].data_received;
  return msg;
}

void SimNetwork::finish(int id) {
  std::lock_guard lock(mu_);
  auto& status = status_[static_cast<std::size_t>(id)];
  if (status == Status::kRunning) --active_;
  status = Status::kFinished;
  cv_.notify_all();
}

void SimNetwork::schedule_loop() {
  std::unique_lock lock(mu_);
  std::vector<InFlight> heads;
  std::vector<std::size_t> head_pairs;
  while (true) {
    cv_.wait(lock, [&] { return active_ == 0; });
    const bool all_finished = std::all_of(status_.begin(), status_.end(), [](Status s) {
      return s == Status::kFinished;
    });
    if (all_finished) return;

    heads.clear();
    head_pairs.clear();
    for (std::size_t p = 0; p < pairs_.size(); ++p) {
      if (!pairs_[p].empty()) {
        heads.push_back(pairs_[p].front().meta);
        head_pairs.push_back(p);
      }
    }
    if (heads.empty()) {
      closed_ = true;
      cv_.notify_all();
      cv_.wait(lock, [&] {
        return std::all_of(status_.begin(), status_.end(),
                           [](Status s) { return s == Status::kFinished; });
      });
      return;
    }

    std::size_t pick;
    try {
      pick = schedule_.choose(heads);
    } catch (...) {
      closed_ = true;
      cv_.notify_all();
      cv_.wait(lock, [&] {
        return std::all_of(status_.begin(), status_.end(),
                           [](Status s) { return s == Status::kFinished; });
      });
      throw;
    }
    auto& queue = pairs_[head_pairs[pick]];
    Pending pending = std::move(queue.front());
    queue.pop_front();
    log_.push_back(pending.meta);
    const auto dst = static_cast<std::size_t>(pending.meta.dst);
    inboxes_[dst].push_back(std::move(pending.msg));
    if (status_[dst] == Status::kWaiting) {
      status_[dst] = Status::kRunning;
      ++active_;
    }
    cv_.notify_all();
  }
}

std::vector<std::exception_ptr> SimNetwork::run(
    const std::function<void(int, Transport&)>& body) {
  {
    std::lock_guard lock(mu_);
    if (running_) throw UsageError("simulated network is single-use");
    running_ = true;
    std::fill(status_.begin(), status_.end(), Status::kRunning);
    active_ = no_nodes_;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(no_nodes_));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(no_nodes_));
  for (int i = 0; i < no_nodes_; ++i) {
    threads.emplace_back([&, i] {
      try {
        body(i, *endpoints_[static_cast<std::size_t>(i)]);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
      }
      finish(i);
    });
  }
  std::exception_ptr schedule_error;
  try {
    schedule_loop();
  } catch (...) {
    schedule_error = std::current_exception();
  }
  for (auto& t : threads) t.join();
  if (schedule_error) std::rethrow_exception(schedule_error);
  return errors;
}

void SimNetwork::run_or_throw(const std::function<void(int, Transport&)>& body) {
  for (auto& e : run(body)) {
    if (e) std::rethrow_exception(e);
  }
}

TransportStats SimNetwork::node_stats(int id) const {
  std::lock_guard lock(mu_);
  return stats_[static_cast<std::size_t>(id)];
}

TransportStats SimNetwork::total_stats() const {
  std::lock_guard lock(mu_);
  TransportStats total;
  for (const auto& s : stats_) {
    total.data_sent += s.data_sent;
    total.data_received += s.data_received;
  }
  return total;
}

}  // namespace fedforge::transport
