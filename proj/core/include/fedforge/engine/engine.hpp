#pragma once

#include <functional>
#include <span>
#include <utility>

#include "fedforge/node_config.hpp"
#include "fedforge/transport/transport.hpp"
#include "fedforge/types.hpp"

namespace fedforge::engine {

// Application callbacks. Both receive the node's private data, which never
// crosses the wire; only the returned payloads do.
template <class Private>
struct CallbackPair {
  // (privateData, updates ordered by ascending source id) -> new local data
  std::function<Bytes(const Private&, std::span<const Bytes>)> server;
  // (localData, privateData, payload from the server) -> update
  std::function<Bytes(const Bytes&, const Private&, const Bytes&)> client;
};

// Type-erased callbacks with the private data already bound.
using ServerFn = std::function<Bytes(std::span<const Bytes>)>;
using ClientFn = std::function<Bytes(const Bytes&, const Bytes&)>;

// Centralized FLA. Per iteration the server broadcasts its local data
// (phase 1), every client answers with client_fn(local, msg) and then
// stores that update as its own local data, and the server replaces its
// local data with server_fn(updates sorted by source id). Returns the final
// local data: the aggregate on the server, the last update on a client.
Bytes run_centralized(transport::Transport& net, const NodeConfig& cfg,
                      const ServerFn& server_fn, const ClientFn& client_fn,
                      Bytes local_data, int iterations);

// Decentralized FLA over a clique. Every node broadcasts its local data,
// answers every peer with client_fn(iteration-start local data, msg) without
// storing the answer, buffers replies that arrive early, and at the end of
// the iteration sets local data to server_fn(replies sorted by source id).
Bytes run_decentralized(transport::Transport& net, const NodeConfig& cfg,
                        const ServerFn& server_fn, const ClientFn& client_fn,
                        Bytes local_data, int iterations);

template <class Private>
Bytes fl_centralized(transport::Transport& net, const NodeConfig& cfg,
                     const CallbackPair<Private>& cbs, Bytes local_data,
                     const Private& private_data, int iterations = 1) {
  return run_centralized(
      net, cfg,
      [&](std::span<const Bytes> updates) { return cbs.server(private_data, updates); },
      [&](const Bytes& local, const Bytes& msg) {
        return cbs.client(local, private_data, msg);
      },
      std::move(local_data), iterations);
}

template <class Private>
Bytes fl_decentralized(transport::Transport& net, const NodeConfig& cfg,
                       const CallbackPair<Private>& cbs, Bytes local_data,
                       const Private& private_data, int iterations = 1) {
  return run_decentralized(
      net, cfg,
      [&](std::span<const Bytes> updates) { return cbs.server(private_data, updates); },
      [&](const Bytes& local, const Bytes& msg) {
        return cbs.client(local, private_data, msg);
      },
      std::move(local_data), iterations);
}

}  // namespace fedforge::engine
