#pragma once

#include <stdexcept>
#include <string>

namespace privdist {

// Every failure the library can report, shared between the C++ core and the
// C API (which maps them 1:1 onto status codes).
enum class Err {
  InvalidArgument,
  UnknownGroup,
  BitsTooSmall,
  Range,
  MalformedCiphertext,
  Codec,
  KeyIntegrity,
  Parse,
  UnknownType,
  Oversize,
  RejectTampered,
  RejectSize,
  BadSignatureP1,
  BadSignatureP2,
  DigestMismatch,
  CorruptedRun,
  ProtocolState,
  Io,
  Internal,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  Err code() const noexcept { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace privdist
