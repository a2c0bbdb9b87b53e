#include "core/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "core/errors.hpp"
#include "core/wire.hpp"

namespace privdist {

void ProtocolConfig::validate() const {
  if (!group.is_element(c_pubkey))
    fail(Err::InvalidArgument, "control-center public key out of range");
  if (!group.is_element(p1_sig_pubkey) || !group.is_element(p2_sig_pubkey))
    fail(Err::InvalidArgument, "signature public key out of range");
  if (n_ciphertexts < 4 && !(allow_maskless && n_ciphertexts == 3))
    fail(Err::InvalidArgument, "N must be at least 4 (3 only in maskless test mode)");
  if (earth.radius_km <= 0)
    fail(Err::InvalidArgument, "earth radius must be positive");
  codec();  // throws if F is invalid for the group
}

const char* message_type(const ProtocolMessage& m) {
  switch (m.body.index()) {
    case 0: return "M1";
    case 1: return "M2";
    case 2: return "M3";
    case 3: return "M4";
    case 4: return "M5";
  }
  return "?";
}

const char* role_name(Role r) {
  switch (r) {
    case Role::P1: return "p1";
    case Role::P2: return "p2";
    case Role::C: return "c";
  }
  return "?";
}

PartyCiphertexts make_party_ciphertexts(const ProtocolConfig& cfg,
                                        const FixedPointCodec& codec,
                                        GeoPoint point, Rng& rng,
                                        ExpCounter* counter) {
  const GroupParams& gp = cfg.group;
  auto enc = [&](double v) {
    return encrypt(gp, cfg.c_pubkey, codec.encode_trig(v), rng, counter);
  };
  PartyCiphertexts out;
  out.cos_lat = enc(std::cos(point.lat));
  out.sin_lat = enc(std::sin(point.lat));
  out.cos_lon = enc(std::cos(point.lon));
  out.sin_lon = enc(std::sin(point.lon));
  return out;
}

ConstantCiphertexts constant_ciphertexts(const ProtocolConfig& cfg,
                                         const FixedPointCodec& codec) {
  const GroupParams& gp = cfg.group;
  ConstantCiphertexts out;
  out.half_neg = encrypt_with(gp, cfg.c_pubkey, codec.encode_real(-0.5), Int(0));
  out.one = encrypt_with(gp, cfg.c_pubkey, codec.encode_real(1.0), Int(0));
  return out;
}

TermCiphertexts compute_terms(const GroupParams& gp, const PartyCiphertexts& own,
                              const PartyCiphertexts& other,
                              const ConstantCiphertexts& constants) {
  Ciphertext e11 = hom_mul(gp, own.cos_lat, other.cos_lat);
  Ciphertext e22 = hom_mul(gp, own.sin_lat, other.sin_lat);
  Ciphertext e33 = hom_mul(gp, own.cos_lon, other.cos_lon);
  Ciphertext e44 = hom_mul(gp, own.sin_lon, other.sin_lon);

  TermCiphertexts out;
  // Pad a1 with two factors of one so every term has exactly five factors.
  out.a1 = hom_mul(gp, hom_mul(gp, constants.half_neg, e22),
                   hom_mul(gp, constants.one, constants.one));
  out.a2 = hom_mul(gp, constants.half_neg, hom_mul(gp, e11, e44));
  out.a3 = hom_mul(gp, constants.half_neg, hom_mul(gp, e11, e33));
  return out;
}

MaskSet gen_masks(const ProtocolConfig& cfg, const FixedPointCodec& codec, Rng& rng) {
  size_t count = cfg.n_ciphertexts >= 3 ? cfg.n_ciphertexts - 3 : 0;
  Int half_scale = codec.term_scale() / 2;
  MaskSet out;
  out.sum = 0;
  out.shares.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    Int v;
    do {
      v = rng.below(codec.term_scale() + 1) - half_scale;
    } while (v == 0);
    Int nonce = rng.range(Int(1), cfg.group.q - 1);
    out.sum += v;
    out.shares.push_back({std::move(v), std::move(nonce)});
  }
  return out;
}

PermutedList build_ea_prime(const ProtocolConfig& cfg, const FixedPointCodec& codec,
                            const TermCiphertexts& terms, const MaskSet& masks,
                            Rng& rng, ExpCounter* counter) {
  std::vector<Ciphertext> list = {terms.a1, terms.a2, terms.a3};
  list.reserve(3 + masks.shares.size());
  for (const MaskShare& m : masks.shares)
    list.push_back(encrypt_with(cfg.group, cfg.c_pubkey,
                                codec.encode_signed(m.value), m.nonce, counter));

  // Fisher-Yates, uniform over S_N.
  std::vector<uint32_t> sigma(list.size());
  for (uint32_t i = 0; i < sigma.size(); ++i) sigma[i] = i;
  for (size_t i = sigma.size(); i > 1; --i)
    std::swap(sigma[i - 1], sigma[rng.below_u64(i)]);

  PermutedList out;
  out.ea_prime.reserve(list.size());
  for (uint32_t idx : sigma) out.ea_prime.push_back(list[idx]);
  out.sigma = std::move(sigma);
  return out;
}

void p2_verify(const ProtocolConfig& cfg, const FixedPointCodec& codec,
               const M2& m2, const PartyCiphertexts& own_cts,
               const ConstantCiphertexts& constants, ExpCounter* counter) {
  const uint32_t n = cfg.n_ciphertexts;
  if (m2.ea_prime.size() != n)
    fail(Err::RejectSize, "ea_prime has wrong length");
  if (m2.masks.size() + 3 != n)
    fail(Err::RejectSize, "mask list has wrong length");

  Int half_scale = codec.term_scale() / 2;
  std::vector<Ciphertext> expected;
  expected.reserve(n);
  TermCiphertexts terms = compute_terms(cfg.group, own_cts, m2.p1_ciphertexts, constants);
  expected.push_back(terms.a1);
  expected.push_back(terms.a2);
  expected.push_back(terms.a3);
  for (const MaskShare& m : m2.masks) {
    if (m.value == 0 || m.value > half_scale || m.value < -half_scale)
      fail(Err::RejectTampered, "mask value outside the sampling interval");
    if (m.nonce < 1 || m.nonce >= cfg.group.q)
      fail(Err::RejectTampered, "mask nonce out of range");
    expected.push_back(encrypt_with(cfg.group, cfg.c_pubkey,
                                    codec.encode_signed(m.value), m.nonce, counter));
  }

  auto key = [&](const Ciphertext& ct) { return ciphertext_bytes(cfg.group, ct); };
  std::vector<std::vector<uint8_t>> lhs, rhs;
  for (const Ciphertext& ct : expected) lhs.push_back(key(ct));
  for (const Ciphertext& ct : m2.ea_prime) rhs.push_back(key(ct));
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  if (lhs != rhs)
    fail(Err::RejectTampered, "ea_prime is not consistent with the received cleartexts");
}

std::vector<uint8_t> canonical_list_payload(const ProtocolConfig& cfg,
                                            std::span<const Ciphertext> list) {
  std::vector<uint8_t> out;
  append_u32_be(out, static_cast<uint32_t>(cfg.session_id.size()));
  out.insert(out.end(), cfg.session_id.begin(), cfg.session_id.end());
  append_u32_be(out, static_cast<uint32_t>(list.size()));
  for (const Ciphertext& ct : list) {
    std::vector<uint8_t> bytes = ciphertext_bytes(cfg.group, ct);
    out.insert(out.end(), bytes.begin(), bytes.end());
  }
  return out;
}

M5 c_process(const ProtocolConfig& cfg, const FixedPointCodec& codec,
             const M3& m3, const M4& m4, const EncKeyPair& c_keys,
             ExpCounter* counter, CostBreakdown* costs) {
  if (m3.ea_prime.size() != cfg.n_ciphertexts)
    fail(Err::RejectSize, "ea_prime has wrong length");

  std::vector<uint8_t> payload = canonical_list_payload(cfg, m3.ea_prime);
  uint64_t before = counter ? counter->value() : 0;
  bool ok1 = verify(cfg.group, cfg.p1_sig_pubkey, payload, m3.sig, counter);
  if (!ok1) {
    if (costs && counter) costs->verify += counter->value() - before;
    fail(Err::BadSignatureP1, "P1 signature does not cover the received list");
  }

  Digest digest = sha256(payload);
  if (digest != m4.digest) {
    if (costs && counter) costs->verify += counter->value() - before;
    fail(Err::DigestMismatch, "P2 signed a different list than P1 sent");
  }
  bool ok2 = verify(cfg.group, cfg.p2_sig_pubkey,
                    std::span<const uint8_t>(m4.digest.data(), m4.digest.size()),
                    m4.sig, counter);
  if (costs && counter) costs->verify += counter->value() - before;
  if (!ok2) fail(Err::BadSignatureP2, "P2 signature does not cover the digest");

  uint64_t before_dec = counter ? counter->value() : 0;
  Int total = 0;
  for (const Ciphertext& ct : m3.ea_prime)
    total += codec.decode_signed(decrypt(cfg.group, c_keys.s, ct, counter));
  if (costs && counter) costs->decrypt += counter->value() - before_dec;

  return M5{std::move(total)};
}

double finalize_distance(const ProtocolConfig& cfg, const FixedPointCodec& codec,
                         const M5& m5, const Int& mask_sum) {
  double a = codec.decode_term_sum(m5.total - mask_sum) + 0.5;
  return distance_from_a(a, cfg.earth);
}

// ---- state machines ----

namespace {

void check_session(const ProtocolConfig& cfg, const ProtocolMessage& msg) {
  if (msg.session != cfg.session_id)
    fail(Err::ProtocolState, "message for a different session");
}

[[noreturn]] void unexpected(const char* who, const ProtocolMessage& msg) {
  fail(Err::ProtocolState,
       std::string(who) + " cannot handle " + message_type(msg) + " in its current state");
}

}  // namespace

Party1::Party1(ProtocolConfig cfg, GeoPoint point, SigKeyPair sig_key, Rng rng)
    : cfg_(std::move(cfg)),
      codec_(cfg_.codec()),
      point_(make_point(point.lat, point.lon)),
      sig_key_(std::move(sig_key)),
      rng_(std::move(rng)) {
  cfg_.validate();
}

std::vector<Envelope> Party1::on_message(const ProtocolMessage& msg) {
  check_session(cfg_, msg);
  if (state_ == State::AwaitM1 && std::holds_alternative<M1>(msg.body)) {
    const M1& m1 = std::get<M1>(msg.body);

    uint64_t mark = counter_.value();
    PartyCiphertexts own = make_party_ciphertexts(cfg_, codec_, point_, rng_, &counter_);
    costs_.ciphertexts += counter_.value() - mark;

    ConstantCiphertexts constants = constant_ciphertexts(cfg_, codec_);
    TermCiphertexts terms = compute_terms(cfg_.group, own, m1.p2_ciphertexts, constants);

    MaskSet masks = gen_masks(cfg_, codec_, rng_);
    mask_sum_ = masks.sum;

    mark = counter_.value();
    PermutedList permuted = build_ea_prime(cfg_, codec_, terms, masks, rng_, &counter_);
    costs_.masks += counter_.value() - mark;

    std::vector<uint8_t> payload = canonical_list_payload(cfg_, permuted.ea_prime);
    mark = counter_.value();
    Signature sig = sign(cfg_.group, sig_key_, payload, rng_, &counter_);
    costs_.signature += counter_.value() - mark;

    state_ = State::AwaitM5;
    M2 m2{permuted.ea_prime, own, masks.shares};
    M3 m3{std::move(permuted.ea_prime), std::move(sig)};
    return {
        {Role::P1, dest_bit(Role::P2), {cfg_.session_id, std::move(m2)}},
        {Role::P1, dest_bit(Role::C), {cfg_.session_id, std::move(m3)}},
    };
  }
  if (state_ == State::AwaitM5 && std::holds_alternative<M5>(msg.body)) {
    distance_km_ = finalize_distance(cfg_, codec_, std::get<M5>(msg.body), mask_sum_);
    state_ = State::Done;
    return {};
  }
  unexpected("P1", msg);
}

double Party1::distance_km() const {
  if (state_ != State::Done) fail(Err::ProtocolState, "session not finished");
  return distance_km_;
}

Party2::Party2(ProtocolConfig cfg, GeoPoint point, SigKeyPair sig_key, Rng rng)
    : cfg_(std::move(cfg)),
      codec_(cfg_.codec()),
      point_(make_point(point.lat, point.lon)),
      sig_key_(std::move(sig_key)),
      rng_(std::move(rng)) {
  cfg_.validate();
}

std::vector<Envelope> Party2::start() {
  if (state_ != State::Fresh) fail(Err::ProtocolState, "P2 already started");
  uint64_t mark = counter_.value();
  own_cts_ = make_party_ciphertexts(cfg_, codec_, point_, rng_, &counter_);
  costs_.ciphertexts += counter_.value() - mark;
  state_ = State::AwaitM2;
  return {{Role::P2, dest_bit(Role::P1), {cfg_.session_id, M1{own_cts_}}}};
}

std::vector<Envelope> Party2::on_message(const ProtocolMessage& msg) {
  check_session(cfg_, msg);
  if (state_ == State::AwaitM2 && std::holds_alternative<M2>(msg.body)) {
    const M2& m2 = std::get<M2>(msg.body);
    ConstantCiphertexts constants = constant_ciphertexts(cfg_, codec_);

    uint64_t mark = counter_.value();
    p2_verify(cfg_, codec_, m2, own_cts_, constants, &counter_);
    costs_.masks += counter_.value() - mark;

    mask_sum_ = 0;
    for (const MaskShare& m : m2.masks) mask_sum_ += m.value;

    std::vector<uint8_t> payload = canonical_list_payload(cfg_, m2.ea_prime);
    Digest digest = sha256(payload);
    mark = counter_.value();
    Signature sig = sign(cfg_.group, sig_key_,
                         std::span<const uint8_t>(digest.data(), digest.size()),
                         rng_, &counter_);
    costs_.signature += counter_.value() - mark;

    state_ = State::AwaitM5;
    return {{Role::P2, dest_bit(Role::C), {cfg_.session_id, M4{digest, std::move(sig)}}}};
  }
  if (state_ == State::AwaitM5 && std::holds_alternative<M5>(msg.body)) {
    distance_km_ = finalize_distance(cfg_, codec_, std::get<M5>(msg.body), mask_sum_);
    state_ = State::Done;
    return {};
  }
  unexpected("P2", msg);
}

double Party2::distance_km() const {
  if (state_ != State::Done) fail(Err::ProtocolState, "session not finished");
  return distance_km_;
}

ControlCenter::ControlCenter(ProtocolConfig cfg, EncKeyPair enc_keys)
    : cfg_(std::move(cfg)), codec_(cfg_.codec()), enc_keys_(std::move(enc_keys)) {
  cfg_.validate();
  if (pow_mod(cfg_.group.g, enc_keys_.s, cfg_.group.p) != cfg_.c_pubkey)
    fail(Err::InvalidArgument, "decryption key does not match the configured public key");
}

std::vector<Envelope> ControlCenter::on_message(const ProtocolMessage& msg) {
  check_session(cfg_, msg);
  if (done_) unexpected("C", msg);
  if (std::holds_alternative<M3>(msg.body)) {
    if (m3_) fail(Err::ProtocolState, "duplicate M3");
    m3_ = std::get<M3>(msg.body);
    return maybe_process();
  }
  if (std::holds_alternative<M4>(msg.body)) {
    if (m4_) fail(Err::ProtocolState, "duplicate M4");
    m4_ = std::get<M4>(msg.body);
    return maybe_process();
  }
  unexpected("C", msg);
}

std::vector<Envelope> ControlCenter::maybe_process() {
  if (!m3_ || !m4_) return {};
  M5 m5 = c_process(cfg_, codec_, *m3_, *m4_, enc_keys_, &counter_, &costs_);
  done_ = true;
  return {{Role::C, static_cast<uint8_t>(dest_bit(Role::P1) | dest_bit(Role::P2)),
           {cfg_.session_id, std::move(m5)}}};
}

std::string ControlCenter::audit_line() const {
  std::ostringstream os;
  os << "session=";
  if (cfg_.session_id.empty()) os << "-";
  for (uint8_t b : cfg_.session_id) {
    static const char* k = "0123456789abcdef";
    os << k[b >> 4] << k[b & 0xf];
  }
  os << " n=" << cfg_.n_ciphertexts << " sig_p1=" << (done_ ? "ok" : "-")
     << " sig_p2=" << (done_ ? "ok" : "-") << " digest=" << (done_ ? "ok" : "-")
     << " decrypted=" << costs_.decrypt << " exps=" << counter_.value();
  return os.str();
}

// ---- in-memory session driver ----

SessionResult run_session(const ProtocolConfig& cfg, GeoPoint p1_point,
                          GeoPoint p2_point, const SigKeyPair& p1_sig,
                          const SigKeyPair& p2_sig, const EncKeyPair& c_keys,
                          Rng p1_rng, Rng p2_rng, const Interceptor& interceptor) {
  Party1 p1(cfg, p1_point, p1_sig, std::move(p1_rng));
  Party2 p2(cfg, p2_point, p2_sig, std::move(p2_rng));
  ControlCenter c(cfg, c_keys);

  SessionResult result;
  std::vector<Envelope> queue;
  auto submit = [&](std::vector<Envelope> out) {
    for (Envelope& e : out) {
      if (interceptor) interceptor(e);
      ++result.transmissions;
      queue.push_back(std::move(e));
    }
  };

  submit(p2.start());
  while (!queue.empty()) {
    Envelope e = std::move(queue.front());
    queue.erase(queue.begin());
    // Round-trip through the wire codec so every in-memory session also
    // exercises serialization.
    ProtocolMessage delivered = decode_frame(encode_frame(e.msg, cfg.group), cfg.group);
    if (e.to & dest_bit(Role::P1)) submit(p1.on_message(delivered));
    if (e.to & dest_bit(Role::P2)) submit(p2.on_message(delivered));
    if (e.to & dest_bit(Role::C)) submit(c.on_message(delivered));
  }

  if (!p1.finished() || !p2.finished() || !c.finished())
    fail(Err::ProtocolState, "session ended before all parties finished");

  result.d_p1 = p1.distance_km();
  result.d_p2 = p2.distance_km();
  result.p1_costs = p1.costs();
  result.p2_costs = p2.costs();
  result.c_costs = c.costs();
  result.p1_exps = p1.exp_count();
  result.p2_exps = p2.exp_count();
  result.c_exps = c.exp_count();
  result.c_audit = c.audit_line();
  return result;
}

double run_naive_single_recipient(const ProtocolConfig& cfg, GeoPoint p1_point,
                                  GeoPoint p2_point, const EncKeyPair& c_keys,
                                  Rng p1_rng, Rng p2_rng) {
  FixedPointCodec codec = cfg.codec();
  PartyCiphertexts p2_cts = make_party_ciphertexts(cfg, codec, p2_point, p2_rng, nullptr);
  PartyCiphertexts p1_cts = make_party_ciphertexts(cfg, codec, p1_point, p1_rng, nullptr);
  ConstantCiphertexts constants = constant_ciphertexts(cfg, codec);
  TermCiphertexts terms = compute_terms(cfg.group, p1_cts, p2_cts, constants);
  MaskSet masks = gen_masks(cfg, codec, p1_rng);
  PermutedList permuted = build_ea_prime(cfg, codec, terms, masks, p1_rng, nullptr);

  Int total = 0;
  for (const Ciphertext& ct : permuted.ea_prime)
    total += codec.decode_signed(decrypt(cfg.group, c_keys.s, ct, nullptr));
  return finalize_distance(cfg, codec, M5{total}, masks.sum);
}

}  // namespace privdist
