#include "core/wire.hpp"

#include <json.hpp>

#include "core/errors.hpp"

namespace privdist {

namespace {

using nlohmann::json;

std::string hex_of_bytes(std::span<const uint8_t> bytes) {
  static const char* k = "0123456789abcdef";
  std::string s;
  s.reserve(2 * bytes.size());
  for (uint8_t b : bytes) {
    s.push_back(k[b >> 4]);
    s.push_back(k[b & 0xf]);
  }
  return s;
}

std::vector<uint8_t> bytes_of_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) fail(Err::Parse, "odd-length byte string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    fail(Err::Parse, "invalid character in byte string");
  };
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>((nibble(hex[2 * i]) << 4) | nibble(hex[2 * i + 1]));
  return out;
}

json element_json(const Int& v, const GroupParams& gp) {
  return to_hex_fixed(v, gp.element_width());
}

Int element_from(const json& j, const GroupParams& gp) {
  if (!j.is_string()) fail(Err::Parse, "group element must be a hex string");
  const std::string& s = j.get_ref<const std::string&>();
  if (s.size() != 2 * gp.element_width())
    fail(Err::Parse, "group element has wrong width for the configured group");
  Int v = from_hex(s);
  if (!gp.is_element(v)) fail(Err::Parse, "group element outside [1, p-1]");
  return v;
}

json ct_json(const Ciphertext& ct, const GroupParams& gp) {
  return json{{"c1", element_json(ct.c1, gp)}, {"c2", element_json(ct.c2, gp)}};
}

Ciphertext ct_from(const json& j, const GroupParams& gp) {
  return {element_from(j.at("c1"), gp), element_from(j.at("c2"), gp)};
}

json party_cts_json(const PartyCiphertexts& p, const GroupParams& gp) {
  return json{{"cos_lat", ct_json(p.cos_lat, gp)},
              {"sin_lat", ct_json(p.sin_lat, gp)},
              {"cos_lon", ct_json(p.cos_lon, gp)},
              {"sin_lon", ct_json(p.sin_lon, gp)}};
}

PartyCiphertexts party_cts_from(const json& j, const GroupParams& gp) {
  return {ct_from(j.at("cos_lat"), gp), ct_from(j.at("sin_lat"), gp),
          ct_from(j.at("cos_lon"), gp), ct_from(j.at("sin_lon"), gp)};
}

json signed_json(const Int& v) {
  Int mag = abs(v);
  return json{{"sign", v < 0 ? "-" : "+"}, {"magnitude", to_hex(mag)}};
}

Int signed_from(const json& j) {
  const std::string& sign = j.at("sign").get_ref<const std::string&>();
  if (sign != "+" && sign != "-") fail(Err::Parse, "sign must be '+' or '-'");
  Int mag = from_hex(j.at("magnitude").get_ref<const std::string&>());
  return sign == "-" ? Int(-mag) : mag;
}

json sig_json(const Signature& sig, const GroupParams& gp) {
  // s lives mod p-1, same width as an element
  return json{{"r", element_json(sig.r, gp)},
              {"s", to_hex_fixed(sig.s, gp.element_width())}};
}

Signature sig_from(const json& j, const GroupParams& gp) {
  Signature sig;
  sig.r = element_from(j.at("r"), gp);
  const std::string& s = j.at("s").get_ref<const std::string&>();
  if (s.size() != 2 * gp.element_width()) fail(Err::Parse, "signature s has wrong width");
  sig.s = from_hex(s);
  if (sig.s >= gp.p - 1) fail(Err::Parse, "signature s outside [0, p-2]");
  return sig;
}

json cts_array(std::span<const Ciphertext> list, const GroupParams& gp) {
  json arr = json::array();
  for (const Ciphertext& ct : list) arr.push_back(ct_json(ct, gp));
  return arr;
}

std::vector<Ciphertext> cts_from_array(const json& j, const GroupParams& gp) {
  if (!j.is_array()) fail(Err::Parse, "ciphertext list must be an array");
  std::vector<Ciphertext> out;
  out.reserve(j.size());
  for (const json& e : j) out.push_back(ct_from(e, gp));
  return out;
}

}  // namespace

std::vector<uint8_t> encode_message(const ProtocolMessage& msg, const GroupParams& gp) {
  json j;
  j["session"] = hex_of_bytes(msg.session);
  if (const M1* m = std::get_if<M1>(&msg.body)) {
    j["type"] = "M1";
    j["p2_ciphertexts"] = party_cts_json(m->p2_ciphertexts, gp);
  } else if (const M2* m = std::get_if<M2>(&msg.body)) {
    j["type"] = "M2";
    j["ea_prime"] = cts_array(m->ea_prime, gp);
    j["p1_ciphertexts"] = party_cts_json(m->p1_ciphertexts, gp);
    json masks = json::array();
    for (const MaskShare& s : m->masks)
      masks.push_back(json{{"value", signed_json(s.value)}, {"nonce", to_hex(s.nonce)}});
    j["masks"] = std::move(masks);
  } else if (const M3* m = std::get_if<M3>(&msg.body)) {
    j["type"] = "M3";
    j["ea_prime"] = cts_array(m->ea_prime, gp);
    j["sig"] = sig_json(m->sig, gp);
  } else if (const M4* m = std::get_if<M4>(&msg.body)) {
    j["type"] = "M4";
    j["digest"] = hex_of_bytes(m->digest);
    j["sig"] = sig_json(m->sig, gp);
  } else if (const M5* m = std::get_if<M5>(&msg.body)) {
    j["type"] = "M5";
    j["total"] = signed_json(m->total);
  }
  std::string text = j.dump();
  if (text.size() > kMaxPayloadBytes) fail(Err::Oversize, "payload above 16 MiB");
  return std::vector<uint8_t>(text.begin(), text.end());
}

ProtocolMessage decode_message(std::span<const uint8_t> payload, const GroupParams& gp) {
  if (payload.size() > kMaxPayloadBytes) fail(Err::Oversize, "payload above 16 MiB");
  json j = json::parse(payload.begin(), payload.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail(Err::Parse, "payload is not a JSON object");

  try {
    ProtocolMessage msg;
    msg.session = bytes_of_hex(j.at("session").get_ref<const std::string&>());
    const std::string& type = j.at("type").get_ref<const std::string&>();
    if (type == "M1") {
      msg.body = M1{party_cts_from(j.at("p2_ciphertexts"), gp)};
    } else if (type == "M2") {
      M2 m;
      m.ea_prime = cts_from_array(j.at("ea_prime"), gp);
      m.p1_ciphertexts = party_cts_from(j.at("p1_ciphertexts"), gp);
      for (const json& e : j.at("masks"))
        m.masks.push_back({signed_from(e.at("value")), from_hex(e.at("nonce").get_ref<const std::string&>())});
      msg.body = std::move(m);
    } else if (type == "M3") {
      msg.body = M3{cts_from_array(j.at("ea_prime"), gp), sig_from(j.at("sig"), gp)};
    } else if (type == "M4") {
      M4 m;
      std::vector<uint8_t> digest = bytes_of_hex(j.at("digest").get_ref<const std::string&>());
      if (digest.size() != m.digest.size()) fail(Err::Parse, "digest must be 32 bytes");
      std::copy(digest.begin(), digest.end(), m.digest.begin());
      m.sig = sig_from(j.at("sig"), gp);
      msg.body = std::move(m);
    } else if (type == "M5") {
      msg.body = M5{signed_from(j.at("total"))};
    } else {
      fail(Err::UnknownType, "unknown message type: " + type);
    }
    return msg;
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    fail(Err::Parse, std::string("malformed message: ") + e.what());
  }
}

std::vector<uint8_t> encode_frame(const ProtocolMessage& msg, const GroupParams& gp) {
  std::vector<uint8_t> payload = encode_message(msg, gp);
  std::vector<uint8_t> frame;
  frame.reserve(payload.size() + 4);
  append_u32_be(frame, static_cast<uint32_t>(payload.size()));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

ProtocolMessage decode_frame(std::span<const uint8_t> frame, const GroupParams& gp) {
  if (frame.size() < 4) fail(Err::Parse, "truncated frame");
  uint32_t len = read_u32_be(frame);
  if (len > kMaxPayloadBytes) fail(Err::Oversize, "frame above 16 MiB");
  if (frame.size() != size_t(len) + 4) fail(Err::Parse, "frame length mismatch");
  return decode_message(frame.subspan(4), gp);
}

}  // namespace privdist
