#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "core/encoding.hpp"
#include "core/group.hpp"
#include "core/haversine.hpp"
#include "core/rng.hpp"
#include "core/sha256.hpp"

namespace privdist {

/// Shared session parameters. All three parties must agree on every field;
/// the ciphertext count N is the privacy/cost dial: the three real terms hide
/// among N-3 masks.
struct ProtocolConfig {
  GroupParams group;
  Int c_pubkey;                     // C's ElGamal encryption key
  uint64_t scale = FixedPointCodec::kDefaultScale;
  EarthModel earth;
  uint32_t n_ciphertexts = 20;      // N
  Int p1_sig_pubkey;
  Int p2_sig_pubkey;
  std::vector<uint8_t> session_id;
  bool allow_maskless = false;      // test mode: permits N = 3 (no masks)

  FixedPointCodec codec() const { return FixedPointCodec(scale, group.p); }
  void validate() const;
};

/// The four trig-value encryptions each party contributes.
struct PartyCiphertexts {
  Ciphertext cos_lat;
  Ciphertext sin_lat;
  Ciphertext cos_lon;
  Ciphertext sin_lon;

  bool operator==(const PartyCiphertexts&) const = default;
};

struct MaskShare {
  Int value;  // signed, in [-F^5/2, F^5/2] \ {0}
  Int nonce;  // encryption randomness in [1, q-1]

  bool operator==(const MaskShare&) const = default;
};

struct MaskSet {
  std::vector<MaskShare> shares;
  Int sum;  // S, exact integer sum of the values
};

/// Encrypted a1, a2, a3, each a product of exactly five encoded factors so
/// that all three share the uniform plaintext scale F^5.
struct TermCiphertexts {
  Ciphertext a1;
  Ciphertext a2;
  Ciphertext a3;
};

/// Deterministic r=0 encryptions of -0.5 and 1.0; both parties derive
/// byte-identical copies, which is what makes P2's recomputation check work.
struct ConstantCiphertexts {
  Ciphertext half_neg;  // (1, p - F/2)
  Ciphertext one;       // (1, F)
};

// The five wire messages.
struct M1 {
  PartyCiphertexts p2_ciphertexts;

  bool operator==(const M1&) const = default;
};
struct M2 {
  std::vector<Ciphertext> ea_prime;  // N ciphertexts, permuted
  PartyCiphertexts p1_ciphertexts;
  std::vector<MaskShare> masks;      // N-3 cleartext masks with their nonces

  bool operator==(const M2&) const = default;
};
struct M3 {
  std::vector<Ciphertext> ea_prime;
  Signature sig;  // P1, over the canonical list payload

  bool operator==(const M3&) const = default;
};
struct M4 {
  Digest digest;  // SHA-256 of the canonical list payload
  Signature sig;  // P2, over the digest bytes

  bool operator==(const M4&) const = default;
};
struct M5 {
  Int total;  // signed: (a - 1/2)*F^5 + S up to encoding error

  bool operator==(const M5&) const = default;
};

struct ProtocolMessage {
  std::vector<uint8_t> session;
  std::variant<M1, M2, M3, M4, M5> body;

  bool operator==(const ProtocolMessage&) const = default;
};

const char* message_type(const ProtocolMessage& m);  // "M1".."M5"

enum class Role { P1, P2, C };
const char* role_name(Role r);

constexpr uint8_t dest_bit(Role r) { return uint8_t(1) << static_cast<int>(r); }

/// One protocol transmission. A broadcast (M5) carries both party bits and
/// counts as a single transmission.
struct Envelope {
  Role from;
  uint8_t to;  // OR of dest_bit()
  ProtocolMessage msg;
};

/// Per-session exponentiation tally split by protocol phase.
struct CostBreakdown {
  uint64_t ciphertexts = 0;  // the four trig encryptions (8 = 4 x 2)
  uint64_t masks = 0;        // mask encryption / re-encryption, 2(N-3)
  uint64_t signature = 0;    // one ElGamal signature
  uint64_t decrypt = 0;      // C only: N decryptions
  uint64_t verify = 0;       // C only: both signature verifications

  uint64_t total() const { return ciphertexts + masks + signature + decrypt + verify; }
};

// ---- protocol building blocks ----

PartyCiphertexts make_party_ciphertexts(const ProtocolConfig& cfg,
                                        const FixedPointCodec& codec,
                                        GeoPoint point, Rng& rng,
                                        ExpCounter* counter);

ConstantCiphertexts constant_ciphertexts(const ProtocolConfig& cfg,
                                         const FixedPointCodec& codec);

/// E11..E44 products plus the three 5-factor terms. Deterministic given the
/// factor ciphertexts: no randomness, no exponentiations.
TermCiphertexts compute_terms(const GroupParams& gp, const PartyCiphertexts& own,
                              const PartyCiphertexts& other,
                              const ConstantCiphertexts& constants);

/// N-3 masks uniform over [-F^5/2, F^5/2] \ {0} with fresh nonces.
MaskSet gen_masks(const ProtocolConfig& cfg, const FixedPointCodec& codec, Rng& rng);

struct PermutedList {
  std::vector<Ciphertext> ea_prime;
  std::vector<uint32_t> sigma;
};

/// Encrypts the masks (2 exponentiations each), appends them to the three
/// term ciphertexts and applies a uniform random permutation.
PermutedList build_ea_prime(const ProtocolConfig& cfg, const FixedPointCodec& codec,
                            const TermCiphertexts& terms, const MaskSet& masks,
                            Rng& rng, ExpCounter* counter);

/// P2's consistency check on M2: deterministically re-encrypts every mask
/// from its cleartext and nonce, recomputes the three term ciphertexts from
/// the party ciphertexts, and requires multiset equality with ea_prime.
/// Throws Err::RejectSize / Err::RejectTampered.
void p2_verify(const ProtocolConfig& cfg, const FixedPointCodec& codec,
               const M2& m2, const PartyCiphertexts& own_cts,
               const ConstantCiphertexts& constants, ExpCounter* counter);

/// Signing payload: session_id length-prefixed, N as 4-byte big-endian, then
/// each ciphertext as fixed-width c1||c2 bytes.
std::vector<uint8_t> canonical_list_payload(const ProtocolConfig& cfg,
                                            std::span<const Ciphertext> list);

/// C's step: verify both signatures against the list, decrypt all N values,
/// decode them as centered signed integers and sum exactly.
M5 c_process(const ProtocolConfig& cfg, const FixedPointCodec& codec,
             const M3& m3, const M4& m4, const EncKeyPair& c_keys,
             ExpCounter* counter, CostBreakdown* costs);

/// a = (total - S)/F^5 + 1/2, then the distance. Throws Err::CorruptedRun
/// if a falls outside the tolerance window.
double finalize_distance(const ProtocolConfig& cfg, const FixedPointCodec& codec,
                         const M5& m5, const Int& mask_sum);

// ---- party state machines ----

/// P1: waits for P2's ciphertexts, builds the permuted list, sends it to P2
/// (with mask cleartexts) and to C (signed), then finalizes on M5.
class Party1 {
 public:
  Party1(ProtocolConfig cfg, GeoPoint point, SigKeyPair sig_key, Rng rng);

  std::vector<Envelope> start() { return {}; }
  std::vector<Envelope> on_message(const ProtocolMessage& msg);

  bool finished() const { return state_ == State::Done; }
  double distance_km() const;
  const Int& mask_sum() const { return mask_sum_; }
  uint64_t exp_count() const { return counter_.value(); }
  const CostBreakdown& costs() const { return costs_; }

 private:
  enum class State { AwaitM1, AwaitM5, Done };

  ProtocolConfig cfg_;
  FixedPointCodec codec_;
  GeoPoint point_;
  SigKeyPair sig_key_;
  Rng rng_;
  State state_ = State::AwaitM1;
  ExpCounter counter_;
  CostBreakdown costs_;
  Int mask_sum_ = 0;
  double distance_km_ = 0;
};

/// P2: opens the session with its ciphertexts, verifies P1's list, signs the
/// digest for C, then finalizes on M5.
class Party2 {
 public:
  Party2(ProtocolConfig cfg, GeoPoint point, SigKeyPair sig_key, Rng rng);

  std::vector<Envelope> start();
  std::vector<Envelope> on_message(const ProtocolMessage& msg);

  bool finished() const { return state_ == State::Done; }
  double distance_km() const;
  const Int& mask_sum() const { return mask_sum_; }
  uint64_t exp_count() const { return counter_.value(); }
  const CostBreakdown& costs() const { return costs_; }

 private:
  enum class State { Fresh, AwaitM2, AwaitM5, Done };

  ProtocolConfig cfg_;
  FixedPointCodec codec_;
  GeoPoint point_;
  SigKeyPair sig_key_;
  Rng rng_;
  State state_ = State::Fresh;
  ExpCounter counter_;
  CostBreakdown costs_;
  PartyCiphertexts own_cts_;
  Int mask_sum_ = 0;
  double distance_km_ = 0;
};

/// C: holds the decryption key, waits for the signed list (M3) and the
/// counterpart digest signature (M4) in either order, then broadcasts the
/// blinded sum. Learns the shuffled decryptions and nothing else.
class ControlCenter {
 public:
  ControlCenter(ProtocolConfig cfg, EncKeyPair enc_keys);

  std::vector<Envelope> start() { return {}; }
  std::vector<Envelope> on_message(const ProtocolMessage& msg);

  bool finished() const { return done_; }
  uint64_t exp_count() const { return counter_.value(); }
  const CostBreakdown& costs() const { return costs_; }
  std::string audit_line() const;

 private:
  std::vector<Envelope> maybe_process();

  ProtocolConfig cfg_;
  FixedPointCodec codec_;
  EncKeyPair enc_keys_;
  ExpCounter counter_;
  CostBreakdown costs_;
  std::optional<M3> m3_;
  std::optional<M4> m4_;
  bool done_ = false;
};

// ---- in-memory session driver ----

struct SessionResult {
  double d_p1 = 0;
  double d_p2 = 0;
  size_t transmissions = 0;
  CostBreakdown p1_costs, p2_costs, c_costs;
  uint64_t p1_exps = 0, p2_exps = 0, c_exps = 0;
  std::string c_audit;
};

/// Hook applied to every envelope before it is put on the wire; tamper tests
/// mutate messages here.
using Interceptor = std::function<void(Envelope&)>;

/// Drives a full session over the deterministic in-memory transport. Every
/// envelope passes through the wire codec (encode + decode), so a session
/// also exercises serialization end to end. Throws the originating party's
/// error on abort.
SessionResult run_session(const ProtocolConfig& cfg, GeoPoint p1_point,
                          GeoPoint p2_point, const SigKeyPair& p1_sig,
                          const SigKeyPair& p2_sig, const EncKeyPair& c_keys,
                          Rng p1_rng, Rng p2_rng,
                          const Interceptor& interceptor = {});

/// The paper's single-recipient flow, kept as an internal test mode: P1 alone
/// talks to C, no signatures, only P1 learns the distance.
double run_naive_single_recipient(const ProtocolConfig& cfg, GeoPoint p1_point,
                                  GeoPoint p2_point, const EncKeyPair& c_keys,
                                  Rng p1_rng, Rng p2_rng);

}  // namespace privdist
