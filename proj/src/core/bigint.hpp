#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace privdist {

using Int = mpz_class;

/// Tally of modular exponentiations, the unit of the protocol's cost model.
/// One counter per party; every exponentiation performed on behalf of that
/// party routes through pow_mod() with a pointer to it. Monotone by
/// construction: the only mutation is tick().
class ExpCounter {
 public:
  void tick() noexcept { ++count_; }
  uint64_t value() const noexcept { return count_; }

 private:
  uint64_t count_ = 0;
};

/// base^exp mod m. Counts one exponentiation on `counter` when non-null.
Int pow_mod(const Int& base, const Int& exp, const Int& m,
            ExpCounter* counter = nullptr);

/// Multiplicative inverse mod m; throws Err::Internal if none exists.
/// Deliberately not counted as an exponentiation.
Int invert_mod(const Int& a, const Int& m);

std::string to_hex(const Int& v);  // lowercase, minimal width, v >= 0
std::string to_hex_fixed(const Int& v, size_t byte_width);
Int from_hex(std::string_view hex);  // throws Err::Parse on bad input

/// Big-endian, left-padded with zeros to exactly `width` bytes.
/// Throws Err::Range if v < 0 or does not fit.
std::vector<uint8_t> to_fixed_bytes(const Int& v, size_t width);
Int from_bytes(std::span<const uint8_t> bytes);

void append_u32_be(std::vector<uint8_t>& out, uint32_t v);
uint32_t read_u32_be(std::span<const uint8_t> bytes);

}  // namespace privdist
