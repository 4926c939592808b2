#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "fedforge/types.hpp"

namespace fedforge::transport {

enum class FrameKind : std::uint8_t { kHello = 0, kData = 1 };

struct Frame {
  FrameKind kind = FrameKind::kData;
  std::uint8_t phase = 1;
  NodeId src = 0;
  Bytes payload;

  static Frame hello(NodeId src) { return {FrameKind::kHello, 0, src, {}}; }
  static Frame data(const Message& m) {
    return {FrameKind::kData, m.phase, m.src, m.payload};
  }

  friend bool operator==(const Frame&, const Frame&) = default;
};

// Wire layout (big-endian):
//   u32 length   (header + payload, i.e. 4 + |payload|)
//   u8  kind     (0 HELLO, 1 DATA)
//   u8  phase
//   u16 src
//   payload bytes verbatim
inline constexpr std::size_t kLengthPrefixSize = 4;
inline constexpr std::size_t kHeaderSize = 4;
inline constexpr std::size_t kMaxPayloadSize = 0xFFFFFFFFu - kHeaderSize;

// Value of the length prefix for a payload of the given size. Throws
// EncodingError when it does not fit into 32 bits.
std::uint32_t frame_length_for(std::size_t payload_size);

// Throws ProtocolError if the frame violates the HELLO/DATA invariants.
void check_frame(const Frame& frame);

Bytes encode_frame(const Frame& frame);

// `bytes` must hold exactly one frame, length prefix included.
Frame decode_frame(std::span<const std::uint8_t> bytes);

// Decodes the part following the length prefix.
Frame decode_frame_body(std::span<const std::uint8_t> body);

// Big-endian helpers shared with payload codecs.
void put_u32(Bytes& out, std::uint32_t v);
void put_u64(Bytes& out, std::uint64_t v);
std::uint32_t get_u32(std::span<const std::uint8_t, 4> in);
std::uint64_t get_u64(std::span<const std::uint8_t, 8> in);

}  // namespace fedforge::transport
