#include "privdist.h"

#include <chrono>
#include <cstring>
#include <deque>
#include <new>
#include <optional>
#include <string>
#include <variant>

#include "core/errors.hpp"
#include "core/group.hpp"
#include "core/haversine.hpp"
#include "core/keyfile.hpp"
#include "core/protocol.hpp"
#include "core/rng.hpp"
#include "core/wire.hpp"

using namespace privdist;

struct privdist_group {
  GroupParams gp;
  std::optional<std::string> name;
};

struct privdist_rng {
  Rng rng;
};

struct privdist_enc_key {
  GroupParams group;
  std::optional<std::string> group_name;
  Int y;
  std::optional<Int> s;
};

struct privdist_sig_key {
  GroupParams group;
  std::optional<std::string> group_name;
  Int v;
  std::optional<Int> x;
};

struct privdist_config {
  ProtocolConfig cfg;
};

namespace {

struct OutFrame {
  std::vector<uint8_t> bytes;
  uint8_t dest_mask;
};

}  // namespace

struct privdist_party {
  std::variant<Party1, Party2, ControlCenter> impl;
  GroupParams group;
  std::deque<OutFrame> outbox;
  std::string last_error;

  template <typename T>
  explicit privdist_party(T machine, GroupParams gp)
      : impl(std::move(machine)), group(std::move(gp)) {}
};

namespace {

privdist_status status_of(Err e) {
  switch (e) {
    case Err::InvalidArgument: return PRIVDIST_ERR_INVALID_ARGUMENT;
    case Err::UnknownGroup: return PRIVDIST_ERR_UNKNOWN_GROUP;
    case Err::BitsTooSmall: return PRIVDIST_ERR_BITS_TOO_SMALL;
    case Err::Range: return PRIVDIST_ERR_RANGE;
    case Err::MalformedCiphertext: return PRIVDIST_ERR_MALFORMED_CIPHERTEXT;
    case Err::Codec: return PRIVDIST_ERR_CODEC;
    case Err::KeyIntegrity: return PRIVDIST_ERR_KEY_INTEGRITY;
    case Err::Parse: return PRIVDIST_ERR_PARSE;
    case Err::UnknownType: return PRIVDIST_ERR_UNKNOWN_TYPE;
    case Err::Oversize: return PRIVDIST_ERR_OVERSIZE;
    case Err::RejectTampered: return PRIVDIST_ERR_REJECT_TAMPERED;
    case Err::RejectSize: return PRIVDIST_ERR_REJECT_SIZE;
    case Err::BadSignatureP1: return PRIVDIST_ERR_BAD_SIGNATURE_P1;
    case Err::BadSignatureP2: return PRIVDIST_ERR_BAD_SIGNATURE_P2;
    case Err::DigestMismatch: return PRIVDIST_ERR_DIGEST_MISMATCH;
    case Err::CorruptedRun: return PRIVDIST_ERR_CORRUPTED_RUN;
    case Err::ProtocolState: return PRIVDIST_ERR_PROTOCOL_STATE;
    case Err::Io: return PRIVDIST_ERR_IO;
    case Err::Internal: return PRIVDIST_ERR_INTERNAL;
  }
  return PRIVDIST_ERR_INTERNAL;
}

template <typename Fn>
privdist_status guarded(Fn&& fn, std::string* detail = nullptr) {
  try {
    fn();
    return PRIVDIST_OK;
  } catch (const Error& e) {
    if (detail) *detail = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    return PRIVDIST_ERR_INTERNAL;
  } catch (const std::exception& e) {
    if (detail) *detail = e.what();
    return PRIVDIST_ERR_INTERNAL;
  }
}

char* dup_text(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* privdist_version(void) { return "0.1.0"; }

const char* privdist_status_str(privdist_status st) {
  switch (st) {
    case PRIVDIST_OK: return "ok";
    case PRIVDIST_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case PRIVDIST_ERR_UNKNOWN_GROUP: return "unknown-group";
    case PRIVDIST_ERR_BITS_TOO_SMALL: return "too-small";
    case PRIVDIST_ERR_RANGE: return "out-of-range";
    case PRIVDIST_ERR_MALFORMED_CIPHERTEXT: return "malformed-ciphertext";
    case PRIVDIST_ERR_CODEC: return "codec";
    case PRIVDIST_ERR_KEY_INTEGRITY: return "key-integrity";
    case PRIVDIST_ERR_PARSE: return "malformed";
    case PRIVDIST_ERR_UNKNOWN_TYPE: return "unknown-type";
    case PRIVDIST_ERR_OVERSIZE: return "oversize";
    case PRIVDIST_ERR_REJECT_TAMPERED: return "reject-tampered";
    case PRIVDIST_ERR_REJECT_SIZE: return "reject-size";
    case PRIVDIST_ERR_BAD_SIGNATURE_P1: return "bad-signature-p1";
    case PRIVDIST_ERR_BAD_SIGNATURE_P2: return "bad-signature-p2";
    case PRIVDIST_ERR_DIGEST_MISMATCH: return "digest-mismatch";
    case PRIVDIST_ERR_CORRUPTED_RUN: return "corrupted-run";
    case PRIVDIST_ERR_PROTOCOL_STATE: return "protocol-state";
    case PRIVDIST_ERR_IO: return "io";
    case PRIVDIST_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case PRIVDIST_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

privdist_status privdist_group_load(const char* name, privdist_group** out) {
  if (!name || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new privdist_group{GroupParams::standard(name), std::string(name)};
  });
}

privdist_status privdist_group_generate(unsigned bits, privdist_rng* rng,
                                        privdist_group** out) {
  if (!rng || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *out = new privdist_group{GroupParams::generate(bits, rng->rng), std::nullopt};
  });
}

void privdist_group_free(privdist_group* g) { delete g; }

unsigned privdist_group_bits(const privdist_group* g) {
  return g ? g->gp.bits() : 0;
}

privdist_status privdist_rng_new(privdist_rng** out) {
  if (!out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new privdist_rng{Rng::from_entropy()}; });
}

privdist_status privdist_rng_new_seeded(uint64_t seed, privdist_rng** out) {
  if (!out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] { *out = new privdist_rng{Rng::from_seed(seed)}; });
}

void privdist_rng_free(privdist_rng* r) { delete r; }

privdist_status privdist_enc_keygen(const privdist_group* g, privdist_rng* rng,
                                    privdist_enc_key** out) {
  if (!g || !rng || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    EncKeyPair kp = keygen(g->gp, rng->rng);
    *out = new privdist_enc_key{g->gp, g->name, kp.y, kp.s};
  });
}

privdist_status privdist_sig_keygen(const privdist_group* g, privdist_rng* rng,
                                    privdist_sig_key** out) {
  if (!g || !rng || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    SigKeyPair kp = sig_keygen(g->gp, rng->rng);
    *out = new privdist_sig_key{g->gp, g->name, kp.v, kp.x};
  });
}

privdist_status privdist_enc_key_export(const privdist_enc_key* k,
                                        int include_secret, char** text_out) {
  if (!k || !text_out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (include_secret && !k->s) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    EncKeyPair kp{include_secret ? *k->s : Int(0), k->y};
    *text_out = dup_text(export_enc_key(k->group, k->group_name, kp, include_secret != 0));
  });
}

privdist_status privdist_sig_key_export(const privdist_sig_key* k,
                                        int include_secret, char** text_out) {
  if (!k || !text_out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (include_secret && !k->x) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    SigKeyPair kp{include_secret ? *k->x : Int(0), k->v};
    *text_out = dup_text(export_sig_key(k->group, k->group_name, kp, include_secret != 0));
  });
}

privdist_status privdist_enc_key_import(const char* text, const privdist_group* group,
                                        privdist_enc_key** out) {
  if (!text || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    LoadedKey k = import_key(text, group ? &group->gp : nullptr);
    if (k.kind != KeyKind::EncSecret && k.kind != KeyKind::EncPublic)
      fail(Err::KeyIntegrity, "not an encryption key file");
    *out = new privdist_enc_key{std::move(k.group), std::move(k.group_name),
                                std::move(k.public_part), std::move(k.secret_part)};
  });
}

privdist_status privdist_sig_key_import(const char* text, const privdist_group* group,
                                        privdist_sig_key** out) {
  if (!text || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    LoadedKey k = import_key(text, group ? &group->gp : nullptr);
    if (k.kind != KeyKind::SigSecret && k.kind != KeyKind::SigPublic)
      fail(Err::KeyIntegrity, "not a signing key file");
    *out = new privdist_sig_key{std::move(k.group), std::move(k.group_name),
                                std::move(k.public_part), std::move(k.secret_part)};
  });
}

int privdist_enc_key_has_secret(const privdist_enc_key* k) {
  return k && k->s ? 1 : 0;
}

int privdist_sig_key_has_secret(const privdist_sig_key* k) {
  return k && k->x ? 1 : 0;
}

void privdist_enc_key_free(privdist_enc_key* k) { delete k; }
void privdist_sig_key_free(privdist_sig_key* k) { delete k; }
void privdist_text_free(char* text) { delete[] text; }

privdist_status privdist_config_new(const privdist_group* group,
                                    const privdist_enc_key* c_public,
                                    const privdist_sig_key* p1_public,
                                    const privdist_sig_key* p2_public,
                                    uint64_t scale, uint32_t n_ciphertexts,
                                    double radius_km, const uint8_t* session_id,
                                    size_t session_id_len, privdist_config** out) {
  if (!group || !c_public || !p1_public || !p2_public || !out)
    return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (session_id_len > 0 && !session_id) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    for (const GroupParams& key_group :
         {c_public->group, p1_public->group, p2_public->group}) {
      if (key_group != group->gp)
        fail(Err::InvalidArgument, "key belongs to a different group");
    }
    ProtocolConfig cfg;
    cfg.group = group->gp;
    cfg.c_pubkey = c_public->y;
    cfg.scale = scale;
    cfg.earth.radius_km = radius_km;
    cfg.n_ciphertexts = n_ciphertexts;
    cfg.p1_sig_pubkey = p1_public->v;
    cfg.p2_sig_pubkey = p2_public->v;
    cfg.session_id.assign(session_id, session_id + session_id_len);
    cfg.validate();
    *out = new privdist_config{std::move(cfg)};
  });
}

void privdist_config_free(privdist_config* c) { delete c; }

privdist_status privdist_party_new_p1(const privdist_config* cfg, double lat_deg,
                                      double lon_deg, const privdist_sig_key* own_secret,
                                      privdist_rng* rng, privdist_party** out) {
  if (!cfg || !own_secret || !rng || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (!own_secret->x) return PRIVDIST_ERR_INVALID_ARGUMENT;
  privdist_status st = guarded([&] {
    if (own_secret->v != cfg->cfg.p1_sig_pubkey)
      fail(Err::InvalidArgument, "signing key does not match the configured P1 public key");
    GeoPoint point = point_from_degrees(lat_deg, lon_deg);
    SigKeyPair key{*own_secret->x, own_secret->v};
    *out = new privdist_party(Party1(cfg->cfg, point, key, std::move(rng->rng)),
                              cfg->cfg.group);
  });
  privdist_rng_free(rng);  // consumed either way
  return st;
}

privdist_status privdist_party_new_p2(const privdist_config* cfg, double lat_deg,
                                      double lon_deg, const privdist_sig_key* own_secret,
                                      privdist_rng* rng, privdist_party** out) {
  if (!cfg || !own_secret || !rng || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (!own_secret->x) return PRIVDIST_ERR_INVALID_ARGUMENT;
  privdist_status st = guarded([&] {
    if (own_secret->v != cfg->cfg.p2_sig_pubkey)
      fail(Err::InvalidArgument, "signing key does not match the configured P2 public key");
    GeoPoint point = point_from_degrees(lat_deg, lon_deg);
    SigKeyPair key{*own_secret->x, own_secret->v};
    *out = new privdist_party(Party2(cfg->cfg, point, key, std::move(rng->rng)),
                              cfg->cfg.group);
  });
  privdist_rng_free(rng);  // consumed either way
  return st;
}

privdist_status privdist_party_new_c(const privdist_config* cfg,
                                     const privdist_enc_key* c_secret,
                                     privdist_party** out) {
  if (!cfg || !c_secret || !out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (!c_secret->s) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    EncKeyPair keys{*c_secret->s, c_secret->y};
    *out = new privdist_party(ControlCenter(cfg->cfg, keys), cfg->cfg.group);
  });
}

void privdist_party_free(privdist_party* p) { delete p; }

privdist_status privdist_party_start(privdist_party* p) {
  if (!p) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded(
      [&] {
        std::vector<Envelope> out = std::visit(
            [](auto& machine) { return machine.start(); }, p->impl);
        for (Envelope& e : out)
          p->outbox.push_back({encode_frame(e.msg, p->group), e.to});
      },
      &p->last_error);
}

privdist_status privdist_party_deliver(privdist_party* p, const uint8_t* frame,
                                       size_t frame_len) {
  if (!p || (!frame && frame_len > 0)) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded(
      [&] {
        ProtocolMessage msg =
            decode_frame(std::span<const uint8_t>(frame, frame_len), p->group);
        std::vector<Envelope> out = std::visit(
            [&](auto& machine) { return machine.on_message(msg); }, p->impl);
        for (Envelope& e : out)
          p->outbox.push_back({encode_frame(e.msg, p->group), e.to});
      },
      &p->last_error);
}

size_t privdist_party_outbox_size(const privdist_party* p) {
  return p ? p->outbox.size() : 0;
}

size_t privdist_party_outbox_front_len(const privdist_party* p) {
  return p && !p->outbox.empty() ? p->outbox.front().bytes.size() : 0;
}

privdist_status privdist_party_outbox_pop(privdist_party* p, uint8_t* buf,
                                          size_t buf_len, size_t* frame_len_out,
                                          uint8_t* dest_mask_out) {
  if (!p || !buf || !frame_len_out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (p->outbox.empty()) return PRIVDIST_ERR_PROTOCOL_STATE;
  const OutFrame& front = p->outbox.front();
  if (front.bytes.size() > buf_len) return PRIVDIST_ERR_BUFFER_TOO_SMALL;
  std::memcpy(buf, front.bytes.data(), front.bytes.size());
  *frame_len_out = front.bytes.size();
  if (dest_mask_out) *dest_mask_out = front.dest_mask;
  p->outbox.pop_front();
  return PRIVDIST_OK;
}

int privdist_party_finished(const privdist_party* p) {
  if (!p) return 0;
  return std::visit([](const auto& machine) { return machine.finished(); }, p->impl) ? 1 : 0;
}

privdist_status privdist_party_distance_km(const privdist_party* p, double* km_out) {
  if (!p || !km_out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  if (std::holds_alternative<ControlCenter>(p->impl))
    return PRIVDIST_ERR_PROTOCOL_STATE;  /* C never learns the distance */
  return guarded([&] {
    if (const Party1* p1 = std::get_if<Party1>(&p->impl)) *km_out = p1->distance_km();
    else *km_out = std::get<Party2>(p->impl).distance_km();
  });
}

uint64_t privdist_party_exp_count(const privdist_party* p) {
  if (!p) return 0;
  return std::visit([](const auto& machine) { return machine.exp_count(); }, p->impl);
}

uint64_t privdist_party_cost(const privdist_party* p, privdist_cost which) {
  if (!p) return 0;
  const CostBreakdown& c =
      std::visit([](const auto& machine) -> const CostBreakdown& { return machine.costs(); },
                 p->impl);
  switch (which) {
    case PRIVDIST_COST_CIPHERTEXTS: return c.ciphertexts;
    case PRIVDIST_COST_MASKS: return c.masks;
    case PRIVDIST_COST_SIGNATURE: return c.signature;
    case PRIVDIST_COST_DECRYPT: return c.decrypt;
    case PRIVDIST_COST_VERIFY: return c.verify;
  }
  return 0;
}

const char* privdist_party_last_error(const privdist_party* p) {
  return p ? p->last_error.c_str() : "";
}

privdist_status privdist_party_audit(const privdist_party* p, char** text_out) {
  if (!p || !text_out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    if (const ControlCenter* c = std::get_if<ControlCenter>(&p->impl)) {
      *text_out = dup_text(c->audit_line());
    } else {
      bool done = privdist_party_finished(p) != 0;
      *text_out = dup_text(std::string("finished=") + (done ? "yes" : "no"));
    }
  });
}

privdist_status privdist_haversine_km(double lat1_deg, double lon1_deg,
                                      double lat2_deg, double lon2_deg,
                                      double radius_km, double* km_out) {
  if (!km_out) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    *km_out = haversine_direct(point_from_degrees(lat1_deg, lon1_deg),
                               point_from_degrees(lat2_deg, lon2_deg),
                               EarthModel{radius_km});
  });
}

privdist_status privdist_bench_exp_ms(const privdist_group* g, privdist_rng* rng,
                                      unsigned reps, double* ms_out) {
  if (!g || !rng || !ms_out || reps == 0) return PRIVDIST_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const GroupParams& gp = g->gp;
    std::vector<Int> exponents;
    exponents.reserve(reps);
    for (unsigned i = 0; i < reps; ++i)
      exponents.push_back(rng->rng.range(Int(1), gp.q - 1));
    Int sink = 1;
    auto t0 = std::chrono::steady_clock::now();
    for (const Int& e : exponents) sink = sink * pow_mod(gp.g, e, gp.p) % gp.p;
    auto t1 = std::chrono::steady_clock::now();
    (void)sink;
    *ms_out = std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
  });
}

}  // extern "C"
