#include "core/keyfile.hpp"

#include <json.hpp>

#include "core/errors.hpp"
#include "core/sha256.hpp"

namespace privdist {

namespace {

using nlohmann::json;

const char* kBase64 = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::string& in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  for (size_t i = 0; i < in.size(); i += 3) {
    uint32_t chunk = uint32_t(uint8_t(in[i])) << 16;
    if (i + 1 < in.size()) chunk |= uint32_t(uint8_t(in[i + 1])) << 8;
    if (i + 2 < in.size()) chunk |= uint32_t(uint8_t(in[i + 2]));
    out.push_back(kBase64[(chunk >> 18) & 63]);
    out.push_back(kBase64[(chunk >> 12) & 63]);
    out.push_back(i + 1 < in.size() ? kBase64[(chunk >> 6) & 63] : '=');
    out.push_back(i + 2 < in.size() ? kBase64[chunk & 63] : '=');
  }
  return out;
}

std::string base64_decode(const std::string& in) {
  auto val = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::string out;
  uint32_t chunk = 0;
  int have = 0;
  for (char c : in) {
    if (c == '\n' || c == '\r') continue;
    if (c == '=') break;
    int v = val(c);
    if (v < 0) fail(Err::KeyIntegrity, "invalid base64 in key file");
    chunk = (chunk << 6) | uint32_t(v);
    if (++have == 4) {
      out.push_back(char((chunk >> 16) & 0xff));
      out.push_back(char((chunk >> 8) & 0xff));
      out.push_back(char(chunk & 0xff));
      have = 0;
      chunk = 0;
    }
  }
  if (have == 2) {
    out.push_back(char((chunk >> 4) & 0xff));
  } else if (have == 3) {
    out.push_back(char((chunk >> 10) & 0xff));
    out.push_back(char((chunk >> 2) & 0xff));
  } else if (have != 0) {
    fail(Err::KeyIntegrity, "truncated base64 in key file");
  }
  return out;
}

const char* kind_label(KeyKind kind) {
  switch (kind) {
    case KeyKind::EncSecret: return "enc-secret";
    case KeyKind::EncPublic: return "enc-public";
    case KeyKind::SigSecret: return "sig-secret";
    case KeyKind::SigPublic: return "sig-public";
  }
  return "?";
}

const char* marker_label(KeyKind kind) {
  switch (kind) {
    case KeyKind::EncSecret: return "PRIVDIST ENCRYPTION SECRET KEY";
    case KeyKind::EncPublic: return "PRIVDIST ENCRYPTION PUBLIC KEY";
    case KeyKind::SigSecret: return "PRIVDIST SIGNING SECRET KEY";
    case KeyKind::SigPublic: return "PRIVDIST SIGNING PUBLIC KEY";
  }
  return "?";
}

std::string checksum(const std::string& kind, const std::string& p_hex,
                     const std::string& g_hex, const std::string& pub_hex,
                     const std::string& sec_hex) {
  std::string material = kind + "\n" + p_hex + "\n" + g_hex + "\n" + pub_hex + "\n" + sec_hex + "\n";
  return digest_hex(sha256(std::span<const uint8_t>(
      reinterpret_cast<const uint8_t*>(material.data()), material.size())));
}

std::string export_key(KeyKind kind, const GroupParams& gp,
                       const std::optional<std::string>& group_name,
                       const Int& pub, const Int* sec) {
  json j;
  std::string p_hex = to_hex(gp.p), g_hex = to_hex(gp.g), pub_hex = to_hex(pub);
  std::string sec_hex = sec ? to_hex(*sec) : "";
  j["kind"] = kind_label(kind);
  j["p"] = p_hex;
  j["g"] = g_hex;
  if (group_name) j["group"] = *group_name;
  j["public"] = pub_hex;
  if (sec) j["secret"] = sec_hex;
  j["check"] = checksum(kind_label(kind), p_hex, g_hex, pub_hex, sec_hex);

  std::string b64 = base64_encode(j.dump());
  std::string out = "-----BEGIN " + std::string(marker_label(kind)) + "-----\n";
  for (size_t i = 0; i < b64.size(); i += 64)
    out += b64.substr(i, 64) + "\n";
  out += "-----END " + std::string(marker_label(kind)) + "-----\n";
  return out;
}

}  // namespace

std::string export_enc_key(const GroupParams& gp, const std::optional<std::string>& group_name,
                           const EncKeyPair& key, bool include_secret) {
  return export_key(include_secret ? KeyKind::EncSecret : KeyKind::EncPublic, gp,
                    group_name, key.y, include_secret ? &key.s : nullptr);
}

std::string export_sig_key(const GroupParams& gp, const std::optional<std::string>& group_name,
                           const SigKeyPair& key, bool include_secret) {
  return export_key(include_secret ? KeyKind::SigSecret : KeyKind::SigPublic, gp,
                    group_name, key.v, include_secret ? &key.x : nullptr);
}

LoadedKey import_key(const std::string& text, const GroupParams* expected_group) {
  size_t begin = text.find("-----BEGIN ");
  size_t begin_end = text.find("-----\n", begin == std::string::npos ? 0 : begin + 11);
  size_t end = text.find("-----END ");
  if (begin == std::string::npos || begin_end == std::string::npos ||
      end == std::string::npos || end <= begin_end)
    fail(Err::KeyIntegrity, "missing BEGIN/END markers");

  std::string body = text.substr(begin_end + 6, end - begin_end - 6);
  json j = json::parse(base64_decode(body), nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(Err::KeyIntegrity, "key payload is not valid JSON");

  try {
    const std::string& kind_str = j.at("kind").get_ref<const std::string&>();
    KeyKind kind;
    if (kind_str == "enc-secret") kind = KeyKind::EncSecret;
    else if (kind_str == "enc-public") kind = KeyKind::EncPublic;
    else if (kind_str == "sig-secret") kind = KeyKind::SigSecret;
    else if (kind_str == "sig-public") kind = KeyKind::SigPublic;
    else fail(Err::KeyIntegrity, "unknown key kind");

    std::string p_hex = j.at("p").get<std::string>();
    std::string g_hex = j.at("g").get<std::string>();
    std::string pub_hex = j.at("public").get<std::string>();
    std::string sec_hex = j.contains("secret") ? j.at("secret").get<std::string>() : "";

    if (j.at("check").get<std::string>() != checksum(kind_str, p_hex, g_hex, pub_hex, sec_hex))
      fail(Err::KeyIntegrity, "key file checksum mismatch");

    bool want_secret = kind == KeyKind::EncSecret || kind == KeyKind::SigSecret;
    if (want_secret == sec_hex.empty())
      fail(Err::KeyIntegrity, "key kind does not match the stored material");

    LoadedKey out;
    out.kind = kind;
    Int p = from_hex(p_hex), g = from_hex(g_hex);
    if (expected_group) {
      if (expected_group->p != p || expected_group->g != g)
        fail(Err::KeyIntegrity, "key file was made for a different group");
      out.group = *expected_group;
    } else {
      out.group = GroupParams::from_parts(std::move(p), std::move(g));
    }
    if (j.contains("group")) out.group_name = j.at("group").get<std::string>();

    out.public_part = from_hex(pub_hex);
    if (!out.group.is_element(out.public_part))
      fail(Err::KeyIntegrity, "public key out of range");
    if (want_secret) {
      out.secret_part = from_hex(sec_hex);
      if (pow_mod(out.group.g, *out.secret_part, out.group.p) != out.public_part)
        fail(Err::KeyIntegrity, "secret key does not reproduce the public key");
    }
    return out;
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    fail(Err::KeyIntegrity, std::string("key payload missing fields: ") + e.what());
  }
}

}  // namespace privdist
