#pragma once

#include <cstdint>
#include <string>

#include "fedforge/types.hpp"

namespace fedforge {

inline constexpr std::uint16_t kDefaultBasePort = 6000;

// Static per-run topology shared by every instance of one run.
struct NodeConfig {
  int no_nodes = 2;
  int node_id = 0;
  int fl_srv_id = 0;
  std::uint16_t base_port = kDefaultBasePort;
  std::string host = "127.0.0.1";

  // Throws UsageError unless 0 <= node_id < no_nodes, 0 <= fl_srv_id <
  // no_nodes, no_nodes >= min_nodes, and every port fits in [1024, 65535].
  void validate(int min_nodes = 1) const;

  std::uint16_t port_of(int id) const;
};

}  // namespace fedforge
