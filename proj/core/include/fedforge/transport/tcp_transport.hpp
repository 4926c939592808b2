#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "fedforge/node_config.hpp"
#include "fedforge/transport/inbox.hpp"
#include "fedforge/transport/transport.hpp"

namespace fedforge::transport {

struct TcpOptions {
  int connect_attempts = 30;
  std::chrono::milliseconds retry_interval{100};
  // Extra time granted to the hello barrier after all outgoing connects.
  std::chrono::milliseconds barrier_grace{2000};
};

// Localhost TCP transport. Node i listens on base_port + i, opens one
// outgoing connection to every peer (used for sending) and accepts one
// incoming connection from every peer (drained into the inbox by a reader
// thread). Construction completes the hello barrier.
class TcpTransport final : public Transport {
 public:
  ~TcpTransport() override;

  TcpTransport(const TcpTransport&) = delete;
  TcpTransport& operator=(const TcpTransport&) = delete;

  int node_id() const override { return cfg_.node_id; }
  int num_nodes() const override { return cfg_.no_nodes; }
  void send(int dst, const Message& msg) override;
  Message recv() override;
  TransportStats stats() const override;

  // Binds, connects to all peers, exchanges HELLO and waits for every peer's
  // HELLO. Throws BindError or StartupTimeoutError.
  static std::unique_ptr<TcpTransport> start(const NodeConfig& cfg,
                                             const TcpOptions& opts = {});

 private:
  TcpTransport(const NodeConfig& cfg, const TcpOptions& opts);

  void bind_listener();
  void accept_loop();
  void reader_loop(int fd);
  void connect_peers();
  void wait_for_barrier(std::chrono::steady_clock::time_point deadline);
  void shutdown_all();

  NodeConfig cfg_;
  TcpOptions opts_;
  Inbox inbox_;

  int listen_fd_ = -1;
  std::vector<int> out_fds_;  // indexed by peer id, -1 for self

  std::mutex peers_mu_;
  std::condition_variable peers_cv_;
  std::vector<int> in_fds_;
  std::vector<bool> hello_seen_;
  int hellos_ = 0;
  std::string startup_failure_;

  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::vector<std::thread> readers_;

  std::atomic<std::uint64_t> data_sent_{0};
  std::atomic<std::uint64_t> data_received_{0};
};

// Convenience alias matching the operation name used throughout the docs.
inline std::unique_ptr<TcpTransport> start_node(const NodeConfig& cfg,
                                                const TcpOptions& opts = {}) {
  return TcpTransport::start(cfg, opts);
}

}  // namespace fedforge::transport
