#include "fedforge/transport/tcp_transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <string>

#include "fedforge/errors.hpp"
#include "fedforge/transport/frame.hpp"

namespace fedforge::transport {
namespace {

std::string errno_text() { return std::strerror(errno); }

sockaddr_in make_addr(const std::string& host, std::uint16_t port) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    throw UsageError("not an IPv4 address: " + host);
  }
  return addr;
}

void write_all(int fd, const Bytes& bytes) {
  std::size_t off = 0;
  while (off < bytes.size()) {
    ssize_t n = ::send(fd, bytes.data() + off, bytes.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("send failed: " + errno_text());
    }
    off += static_cast<std::size_t>(n);
  }
}

enum class ReadStatus { kOk, kEof };

// kEof only when the stream ends before the first byte.
ReadStatus read_exact(int fd, std::uint8_t* buf, std::size_t len) {
  std::size_t off = 0;
  while (off < len) {
    ssize_t n = ::recv(fd, buf + off, len - off, 0);
    if (n == 0) {
      if (off == 0) return ReadStatus::kEof;
      throw FramingError("connection closed mid-frame");
    }
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("recv failed: " + errno_text());
    }
    off += static_cast<std::size_t>(n);
  }
  return ReadStatus::kOk;
}

std::optional<Frame> read_frame(int fd) {
  std::uint8_t prefix[kLengthPrefixSize];
  if (read_exact(fd, prefix, sizeof prefix) == ReadStatus::kEof) {
    return std::nullopt;
  }
  const std::uint32_t length = get_u32(std::span<const std::uint8_t, 4>(prefix, 4));
  if (length < kHeaderSize) throw FramingError("frame shorter than header");
  Bytes body(length);
  if (read_exact(fd, body.data(), body.size()) == ReadStatus::kEof) {
    throw FramingError("connection closed mid-frame");
  }
  return decode_frame_body(body);
}

}  // namespace

TcpTransport::TcpTransport(const NodeConfig& cfg, const TcpOptions& opts)
    : cfg_(cfg),
      opts_(opts),
      inbox_(cfg.no_nodes - 1),
      out_fds_(static_cast<std::size_t>(cfg.no_nodes), -1),
      hello_seen_(static_cast<std::size_t>(cfg.no_nodes), false) {}

std::unique_ptr<TcpTransport> TcpTransport::start(const NodeConfig& cfg,
                                                  const TcpOptions& opts) {
  cfg.validate(1);
  std::unique_ptr<TcpTransport> t(new TcpTransport(cfg, opts));
  if (cfg.no_nodes == 1) return t;
  t->bind_listener();
  t->accept_thread_ = std::thread([raw = t.get()] { raw->accept_loop(); });
  t->connect_peers();
  t->wait_for_barrier(std::chrono::steady_clock::now() +
                      opts.retry_interval * opts.connect_attempts +
                      opts.barrier_grace);
  return t;
}

TcpTransport::~TcpTransport() { shutdown_all(); }

void TcpTransport::bind_listener() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw TransportError("socket: " + errno_text());
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = make_addr(cfg_.host, cfg_.port_of(cfg_.node_id));
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    throw BindError("node " + std::to_string(cfg_.node_id) + " cannot bind port " +
                    std::to_string(cfg_.port_of(cfg_.node_id)) + ": " + errno_text());
  }
  if (::listen(listen_fd_, cfg_.no_nodes) < 0) {
    throw BindError("listen: " + errno_text());
  }
}

void TcpTransport::accept_loop() {
  int accepted = 0;
  while (!stopping_ && accepted < cfg_.no_nodes - 1) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    int rc = ::poll(&pfd, 1, 50);
    if (rc <= 0) continue;
    int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;
    ++accepted;
    std::lock_guard lock(peers_mu_);
    in_fds_.push_back(fd);
    readers_.emplace_back([this, fd] { reader_loop(fd); });
  }
}

void TcpTransport::reader_loop(int fd) {
  int peer = -1;
  try {
    while (true) {
      std::optional<Frame> frame = read_frame(fd);
      if (!frame) break;
      if (frame->kind == FrameKind::kHello) {
        std::lock_guard lock(peers_mu_);
        const int src = frame->src;
        if (peer != -1 || src >= cfg_.no_nodes || src == cfg_.node_id ||
            hello_seen_[static_cast<std::size_t>(src)]) {
          throw ProtocolError("unexpected HELLO from node " + std::to_string(src));
        }
        peer = src;
        hello_seen_[static_cast<std::size_t>(src)] = true;
        ++hellos_;
        peers_cv_.notify_all();
        continue;
      }
      if (peer == -1) throw ProtocolError("DATA frame before HELLO");
      if (frame->src != peer) {
        throw ProtocolError("DATA frame claims src " + std::to_string(frame->src) +
                            " on the connection of node " + std::to_string(peer));
      }
      ++data_received_;
      inbox_.push(Message{frame->phase, frame->src, std::move(frame->payload)});
    }
  } catch (const std::exception& e) {
    if (!stopping_) {
      inbox_.fail(std::string("connection from node ") + std::to_string(peer) +
                  " failed: " + e.what());
      std::lock_guard lock(peers_mu_);
      startup_failure_ = e.what();
      peers_cv_.notify_all();
    }
    return;
  }
  if (peer != -1) inbox_.close_peer();
}

void TcpTransport::connect_peers() {
  for (int p = 0; p < cfg_.no_nodes; ++p) {
    if (p == cfg_.node_id) continue;
    sockaddr_in addr = make_addr(cfg_.host, cfg_.port_of(p));
    int fd = -1;
    for (int attempt = 0; attempt < opts_.connect_attempts; ++attempt) {
      fd = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
      if (fd < 0) throw TransportError("socket: " + errno_text());
      if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0) break;
      ::close(fd);
      fd = -1;
      std::this_thread::sleep_for(opts_.retry_interval);
    }
    if (fd < 0) {
      throw StartupTimeoutError("node " + std::to_string(cfg_.node_id) +
                                ": peer " + std::to_string(p) + " unreachable after " +
                                std::to_string(opts_.connect_attempts) + " attempts");
    }
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    out_fds_[static_cast<std::size_t>(p)] = fd;
    write_all(fd, encode_frame(Frame::hello(static_cast<NodeId>(cfg_.node_id))));
  }
}

void TcpTransport::wait_for_barrier(std::chrono::steady_clock::time_point deadline) {
  std::unique_lock lock(peers_mu_);
  bool done = peers_cv_.wait_until(lock, deadline, [&] {
    return hellos_ == cfg_.no_nodes - 1 || !startup_failure_.empty();
  });
  if (!startup_failure_.empty()) {
    throw TransportError("startup failed: " + startup_failure_);
  }
  if (!done) {
    throw StartupTimeoutError("node " + std::to_string(cfg_.node_id) + " received " +
                              std::to_string(hellos_) + " of " +
                              std::to_string(cfg_.no_nodes - 1) + " HELLO messages");
  }
}

void TcpTransport::send(int dst, const Message& msg) {
  if (dst < 0 || dst >= cfg_.no_nodes || dst == cfg_.node_id) {
    throw TransportError("invalid destination " + std::to_string(dst));
  }
  if (msg.src != cfg_.node_id) {
    throw TransportError("message src does not match the sending node");
  }
  int fd = out_fds_[static_cast<std::size_t>(dst)];
  if (fd < 0) throw TransportError("no connection to node " + std::to_string(dst));
  write_all(fd, encode_frame(Frame::data(msg)));
  ++data_sent_;
}

Message TcpTransport::recv() { return inbox_.pop(); }

TransportStats TcpTransport::stats() const {
  return {data_sent_.load(), data_received_.load()};
}

void TcpTransport::shutdown_all() {
  stopping_ = true;
  for (int& fd : out_fds_) {
    if (fd >= 0) {
      ::shutdown(fd, SHUT_WR);
      ::close(fd);
      fd = -1;
    }
  }
  if (accept_thread_.joinable()) accept_thread_.join();
  {
    std::lock_guard lock(peers_mu_);
    for (int fd : in_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  for (auto& r : readers_) {
    if (r.joinable()) r.join();
  }
  for (int fd : in_fds_) ::close(fd);
  in_fds_.clear();
  if (listen_fd_ >= 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
}

}  // namespace fedforge::transport
