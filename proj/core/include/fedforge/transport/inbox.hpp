#pragma once

#include <condition_variable>
#include <deque>
#include <mutex>
#include <optional>
#include <string>

#include "fedforge/types.hpp"

namespace fedforge::transport {

// FIFO of decoded messages between the network side (producers) and the
// engine (single consumer).
class Inbox {
 public:
  explicit Inbox(int open_peers) : open_peers_(open_peers) {}

  void push(Message msg);

  // One producer reached end of stream.
  void close_peer();

  // Wakes the consumer with an error; recv() throws TransportError.
  void fail(std::string reason);

  Message pop();

  std::optional<Message> try_pop();
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::deque<Message> queue_;
  int open_peers_;
  std::optional<std::string> failure_;
};

}  // namespace fedforge::transport
