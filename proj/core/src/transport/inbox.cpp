#include "fedforge/transport/inbox.hpp"

#include "fedforge/errors.hpp"

namespace fedforge::transport {

void Inbox::push(Message msg) {
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(msg));
  }
  cv_.notify_one();
}

void Inbox::close_peer() {
  {
    std::lock_guard lock(mu_);
    if (open_peers_ > 0) --open_peers_;
  }
  cv_.notify_one();
}

void Inbox::fail(std::string reason) {
  {
    std::lock_guard lock(mu_);
    if (!failure_) failure_ = std::move(reason);
  }
  cv_.notify_one();
}

Message Inbox::pop() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] {
    return !queue_.empty() || open_peers_ == 0 || failure_.has_value();
  });
  if (!queue_.empty()) {
    Message msg = std::move(queue_.front());
    queue_.pop_front();
    return msg;
  }
  if (failure_) throw TransportError(*failure_);
  throw TransportClosedError("all peers disconnected with an empty inbox");
}

std::optional<Message> Inbox::try_pop() {
  std::lock_guard lock(mu_);
  if (queue_.empty()) return std::nullopt;
  Message msg = std::move(queue_.front());
  queue_.pop_front();
  return msg;
}

std::size_t Inbox::size() const {
  std::lock_guard lock(mu_);
  return queue_.size();
}

}  // namespace fedforge::transport
