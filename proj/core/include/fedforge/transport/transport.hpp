#pragma once

#include <cstdint>

#include "fedforge/types.hpp"

namespace fedforge::transport {

struct TransportStats {
  std::uint64_t data_sent = 0;
  std::uint64_t data_received = 0;
};

// Point-to-point channel seen by one node's engine. Handles are confined to
// their node; send/recv are called from the engine flow only.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual int node_id() const = 0;
  virtual int num_nodes() const = 0;

  // Queues `msg` for delivery to `dst`. Per (src, dst) pair, delivery order
  // equals send order.
  virtual void send(int dst, const Message& msg) = 0;

  // Blocks until a DATA message is available. Throws TransportClosedError
  // once the queue is empty and no peer can send any more.
  virtual Message recv() = 0;

  virtual TransportStats stats() const = 0;
};

}  // namespace fedforge::transport
