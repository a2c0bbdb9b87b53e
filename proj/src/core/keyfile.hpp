#pragma once

#include <optional>
#include <string>

#include "core/group.hpp"

namespace privdist {

// Key files are PEM-like text: a base64 JSON payload between BEGIN/END
// markers. The payload is self-contained (it embeds p and g) and carries a
// SHA-256 checksum over the key material, so accidental edits surface as
// Err::KeyIntegrity instead of silently corrupt keys. Secret files
// additionally re-derive the public half on load and compare.

enum class KeyKind { EncSecret, EncPublic, SigSecret, SigPublic };

struct LoadedKey {
  KeyKind kind;
  GroupParams group;
  std::optional<std::string> group_name;
  Int public_part;              // y or v
  std::optional<Int> secret_part;  // s or x when the file holds a secret key
};

std::string export_enc_key(const GroupParams& gp, const std::optional<std::string>& group_name,
                           const EncKeyPair& key, bool include_secret);
std::string export_sig_key(const GroupParams& gp, const std::optional<std::string>& group_name,
                           const SigKeyPair& key, bool include_secret);

/// Parses and integrity-checks a key file. When `expected_group` is given the
/// embedded group must match it exactly (and no fresh primality test runs);
/// otherwise the embedded group is validated from scratch.
LoadedKey import_key(const std::string& text, const GroupParams* expected_group = nullptr);

}  // namespace privdist
