#include "core/bigint.hpp"

#include <cctype>

#include "core/errors.hpp"

namespace privdist {

Int pow_mod(const Int& base, const Int& exp, const Int& m, ExpCounter* counter) {
  if (counter) counter->tick();
  Int r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int invert_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    fail(Err::Internal, "element has no inverse modulo m");
  return r;
}

std::string to_hex(const Int& v) {
  if (v < 0) fail(Err::Range, "negative value has no hex form here");
  return v.get_str(16);
}

std::string to_hex_fixed(const Int& v, size_t byte_width) {
  std::string h = to_hex(v);
  size_t want = 2 * byte_width;
  if (h.size() > want) fail(Err::Range, "value too wide for fixed hex field");
  return std::string(want - h.size(), '0') + h;
}

Int from_hex(std::string_view hex) {
  if (hex.empty()) fail(Err::Parse, "empty hex string");
  for (char c : hex) {
    if (!std::isxdigit(static_cast<unsigned char>(c)) ||
        (std::isalpha(static_cast<unsigned char>(c)) && std::isupper(static_cast<unsigned char>(c))))
      fail(Err::Parse, "invalid character in hex string");
  }
  Int r;
  if (mpz_set_str(r.get_mpz_t(), std::string(hex).c_str(), 16) != 0)
    fail(Err::Parse, "invalid hex string");
  return r;
}

std::vector<uint8_t> to_fixed_bytes(const Int& v, size_t width) {
  if (v < 0) fail(Err::Range, "cannot serialize a negative value");
  size_t need = (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8;
  if (v != 0 && need > width) fail(Err::Range, "value too wide for field");
  std::vector<uint8_t> out(width, 0);
  size_t written = 0;
  mpz_export(out.data() + (width - need), &written, 1, 1, 1, 0, v.get_mpz_t());
  return out;
}

Int from_bytes(std::span<const uint8_t> bytes) {
  Int r;
  mpz_import(r.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  return r;
}

void append_u32_be(std::vector<uint8_t>& out, uint32_t v) {
  out.push_back(static_cast<uint8_t>(v >> 24));
  out.push_back(static_cast<uint8_t>(v >> 16));
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

uint32_t read_u32_be(std::span<const uint8_t> bytes) {
  if (bytes.size() < 4) fail(Err::Parse, "truncated length field");
  return (uint32_t(bytes[0]) << 24) | (uint32_t(bytes[1]) << 16) |
         (uint32_t(bytes[2]) << 8) | uint32_t(bytes[3]);
}

}  // namespace privdist
