#include "core/errors.hpp"

namespace privdist {

const char* err_name(Err e) {
  switch (e) {
    case Err::InvalidArgument: return "invalid-argument";
    case Err::UnknownGroup: return "unknown-group";
    case Err::BitsTooSmall: return "too-small";
    case Err::Range: return "out-of-range";
    case Err::MalformedCiphertext: return "malformed-ciphertext";
    case Err::Codec: return "codec";
    case Err::KeyIntegrity: return "key-integrity";
    case Err::Parse: return "malformed";
    case Err::UnknownType: return "unknown-type";
    case Err::Oversize: return "oversize";
    case Err::RejectTampered: return "reject-tampered";
    case Err::RejectSize: return "reject-size";
    case Err::BadSignatureP1: return "bad-signature-p1";
    case Err::BadSignatureP2: return "bad-signature-p2";
    case Err::DigestMismatch: return "digest-mismatch";
    case Err::CorruptedRun: return "corrupted-run";
    case Err::ProtocolState: return "protocol-state";
    case Err::Io: return "io";
    case Err::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace privdist
