#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/group.hpp"
#include "core/protocol.hpp"

namespace privdist {

// Wire format: a 4-byte big-endian payload length, then a UTF-8 JSON object
// with "type" (M1..M5), "session" (hex) and per-type fields. Group elements
// travel as fixed-width lowercase hex; the signed M5 total as an explicit
// sign plus a hex magnitude.

inline constexpr size_t kMaxPayloadBytes = 16 * 1024 * 1024;

std::vector<uint8_t> encode_message(const ProtocolMessage& msg, const GroupParams& gp);
ProtocolMessage decode_message(std::span<const uint8_t> payload, const GroupParams& gp);

std::vector<uint8_t> encode_frame(const ProtocolMessage& msg, const GroupParams& gp);
ProtocolMessage decode_frame(std::span<const uint8_t> frame, const GroupParams& gp);

}  // namespace privdist
