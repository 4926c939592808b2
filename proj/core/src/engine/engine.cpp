#include "fedforge/engine/engine.hpp"

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "fedforge/engine/round_tracker.hpp"
#include "fedforge/errors.hpp"

namespace fedforge::engine {
namespace {

using transport::Transport;

void check_setup(const Transport& net, const NodeConfig& cfg, int iterations) {
  cfg.validate(2);
  if (net.num_nodes() != cfg.no_nodes || net.node_id() != cfg.node_id) {
    throw UsageError("transport topology does not match the node config");
  }
  if (iterations < 1) throw UsageError("number of iterations must be at least 1");
}

Message make_message(int phase, int src, Bytes payload) {
  return Message{static_cast<std::uint8_t>(phase), static_cast<NodeId>(src),
                 std::move(payload)};
}

// Runs `step`, rewrapping transport and protocol failures with context.
template <class F>
auto in_context(int round, Phase phase, F&& step) {
  try {
    return step();
  } catch (const TransportError& e) {
    throw EngineError(round, static_cast<int>(phase), e.what());
  } catch (const ProtocolError& e) {
    throw EngineError(round, static_cast<int>(phase), e.what());
  }
}

std::vector<Bytes> sorted_updates(std::vector<std::optional<Bytes>>& slots) {
  std::vector<Bytes> out;
  out.reserve(slots.size());
  for (auto& slot : slots) {
    if (slot) out.push_back(std::move(*slot));
  }
  return out;
}

}  // namespace

Bytes run_centralized(Transport& net, const NodeConfig& cfg, const ServerFn& server_fn,
                      const ClientFn& client_fn, Bytes local_data, int iterations) {
  check_setup(net, cfg, iterations);
  const int self = cfg.node_id;
  const int server = cfg.fl_srv_id;
  const int n = cfg.no_nodes;

  for (int round = 0; round < iterations; ++round) {
    if (self == server) {
      in_context(round, Phase::kBroadcast, [&] {
        for (int peer = 0; peer < n; ++peer) {
          if (peer != self) net.send(peer, make_message(1, self, local_data));
        }
      });

      std::vector<std::optional<Bytes>> slots(static_cast<std::size_t>(n));
      in_context(round, Phase::kAggregate, [&] {
        for (int received = 0; received < n - 1; ++received) {
          Message msg = net.recv();
          if (msg.phase != 2) {
            throw ProtocolError("server expected a phase-2 update, got phase " +
                                std::to_string(msg.phase) + " from node " +
                                std::to_string(msg.src));
          }
          if (msg.src >= n || msg.src == self) {
            throw ProtocolError("update from invalid source " + std::to_string(msg.src));
          }
          auto& slot = slots[msg.src];
          if (slot) {
            throw ProtocolError("duplicate update from node " + std::to_string(msg.src));
          }
          slot = std::move(msg.payload);
        }
      });

      std::vector<Bytes> updates = sorted_updates(slots);
      local_data = server_fn(updates);
    } else {
      Message msg = in_context(round, Phase::kClient, [&] { return net.recv(); });
      if (msg.phase != 1 || msg.src != server) {
        throw EngineError(round, static_cast<int>(Phase::kClient),
                          "client expected the server's phase-1 message, got phase " +
                              std::to_string(msg.phase) + " from node " +
                              std::to_string(msg.src));
      }
      Bytes update = client_fn(local_data, msg.payload);
      in_context(round, Phase::kClient,
                 [&] { net.send(server, make_message(2, self, update)); });
      local_data = std::move(update);
    }
  }
  return local_data;
}

Bytes run_decentralized(Transport& net, const NodeConfig& cfg, const ServerFn& server_fn,
                        const ClientFn& client_fn, Bytes local_data, int iterations) {
  check_setup(net, cfg, iterations);
  const int self = cfg.node_id;
  const int n = cfg.no_nodes;

  std::deque<Message> carried;  // next round's phase-1 messages, arrival order

  for (int round = 0; round < iterations; ++round) {
    RoundTracker tracker(self, n, round == iterations - 1);
    std::deque<Message> held;  // phase-2 messages received during phase 2
    std::deque<Message> next_carried;
    std::vector<std::optional<Bytes>> slots(static_cast<std::size_t>(n));

    in_context(round, Phase::kBroadcast, [&] {
      for (int peer = 0; peer < n; ++peer) {
        if (peer != self) net.send(peer, make_message(1, self, local_data));
      }
    });

    auto dispatch = [&](Message msg, Phase current) {
      switch (tracker.handle_incoming(msg, current)) {
        case Disposition::kProcessAsClient: {
          // Reply computed from the iteration-start local data, not stored.
          Bytes reply = client_fn(local_data, msg.payload);
          net.send(msg.src, make_message(2, self, std::move(reply)));
          break;
        }
        case Disposition::kBuffer:
          held.push_back(std::move(msg));
          break;
        case Disposition::kProcessAsUpdate:
          slots[msg.src] = std::move(msg.payload);
          break;
        case Disposition::kDeferToNextRound:
          next_carried.push_back(std::move(msg));
          break;
      }
    };

    in_context(round, Phase::kClient, [&] {
      while (!carried.empty()) {
        Message msg = std::move(carried.front());
        carried.pop_front();
        dispatch(std::move(msg), Phase::kClient);
      }
      while (!tracker.client_duty_done()) dispatch(net.recv(), Phase::kClient);
    });

    in_context(round, Phase::kAggregate, [&] {
      for (auto& msg : held) slots[msg.src] = std::move(msg.payload);
      held.clear();
      while (!tracker.all_updates_in()) dispatch(net.recv(), Phase::kAggregate);
    });

    std::vector<Bytes> updates = sorted_updates(slots);
    local_data = server_fn(updates);
    carried = std::move(next_carried);
  }
  return local_data;
}

}  // namespace fedforge::engine
