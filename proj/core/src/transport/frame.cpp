#include "fedforge/transport/frame.hpp"

#include <string>

#include "fedforge/errors.hpp"
#include "fedforge/node_config.hpp"

namespace fedforge {

void NodeConfig::validate(int min_nodes) const {
  if (no_nodes < min_nodes) {
    throw UsageError("number of nodes must be at least " +
                     std::to_string(min_nodes) + ", got " +
                     std::to_string(no_nodes));
  }
  if (no_nodes > 0xFFFF) throw UsageError("too many nodes");
  if (node_id < 0 || node_id >= no_nodes) {
    throw UsageError("node id " + std::to_string(node_id) +
                     " out of range [0, " + std::to_string(no_nodes) + ")");
  }
  if (fl_srv_id < 0 || fl_srv_id >= no_nodes) {
    throw UsageError("server id " + std::to_string(fl_srv_id) +
                     " out of range [0, " + std::to_string(no_nodes) + ")");
  }
  if (base_port < 1024 || static_cast<long>(base_port) + no_nodes - 1 > 65535) {
    throw UsageError("ports " + std::to_string(base_port) + ".." +
                     std::to_string(static_cast<long>(base_port) + no_nodes - 1) +
                     " do not fit in [1024, 65535]");
  }
}

std::uint16_t NodeConfig::port_of(int id) const {
  return static_cast<std::uint16_t>(base_port + id);
}

}  // namespace fedforge

namespace fedforge::transport {

void put_u32(Bytes& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

void put_u64(Bytes& out, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(v >> shift));
  }
}

std::uint32_t get_u32(std::span<const std::uint8_t, 4> in) {
  std::uint32_t v = 0;
  for (auto b : in) v = (v << 8) | b;
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t, 8> in) {
  std::uint64_t v = 0;
  for (auto b : in) v = (v << 8) | b;
  return v;
}

std::uint32_t frame_length_for(std::size_t payload_size) {
  if (payload_size > kMaxPayloadSize) {
    throw EncodingError("payload of " + std::to_string(payload_size) +
                        " bytes exceeds the 32-bit frame length");
  }
  return static_cast<std::uint32_t>(payload_size + kHeaderSize);
}

void check_frame(const Frame& frame) {
  switch (frame.kind) {
    case FrameKind::kHello:
      if (frame.phase != 0 || !frame.payload.empty()) {
        throw ProtocolError("HELLO frame must have phase 0 and no payload");
      }
      return;
    case FrameKind::kData:
      if (frame.phase != 1 && frame.phase != 2) {
        throw ProtocolError("DATA frame phase must be 1 or 2, got " +
                            std::to_string(frame.phase));
      }
      return;
  }
  throw ProtocolError("unknown frame kind " +
                      std::to_string(static_cast<int>(frame.kind)));
}

Bytes encode_frame(const Frame& frame) {
  check_frame(frame);
  const std::uint32_t length = frame_length_for(frame.payload.size());
  Bytes out;
  out.reserve(kLengthPrefixSize + length);
  put_u32(out, length);
  out.push_back(static_cast<std::uint8_t>(frame.kind));
  out.push_back(frame.phase);
  out.push_back(static_cast<std::uint8_t>(frame.src >> 8));
  out.push_back(static_cast<std::uint8_t>(frame.src));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Frame decode_frame_body(std::span<const std::uint8_t> body) {
  if (body.size() < kHeaderSize) {
    throw FramingError("truncated frame header (" +
                       std::to_string(body.size()) + " bytes)");
  }
  const std::uint8_t kind = body[0];
  if (kind > static_cast<std::uint8_t>(FrameKind::kData)) {
    throw ProtocolError("unknown frame kind " + std::to_string(kind));
  }
  Frame frame;
  frame.kind = static_cast<FrameKind>(kind);
  frame.phase = body[1];
  frame.src = static_cast<NodeId>((body[2] << 8) | body[3]);
  frame.payload.assign(body.begin() + kHeaderSize, body.end());
  check_frame(frame);
  return frame;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kLengthPrefixSize) {
    throw FramingError("truncated length prefix");
  }
  const std::uint32_t length = get_u32(bytes.first<4>());
  const std::size_t available = bytes.size() - kLengthPrefixSize;
  if (available < length) {
    throw FramingError("truncated frame: length prefix says " +
                       std::to_string(length) + " bytes, " +
                       std::to_string(available) + " present");
  }
  if (available > length) {
    throw FramingError("trailing bytes after frame");
  }
  return decode_frame_body(bytes.subspan(kLengthPrefixSize));
}

}  // namespace fedforge::transport
