#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace privdist {

using Digest = std::array<uint8_t, 32>;

Digest sha256(std::span<const uint8_t> data);
std::string digest_hex(const Digest& d);

}  // namespace privdist
