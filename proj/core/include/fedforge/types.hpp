#pragma once

#include <cstdint>
#include <vector>

namespace fedforge {

using NodeId = std::uint16_t;
using Bytes = std::vector<std::uint8_t>;

// Protocol unit handed to the engine. HELLO frames never surface here.
struct Message {
  std::uint8_t phase = 1;
  NodeId src = 0;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

}  // namespace fedforge
