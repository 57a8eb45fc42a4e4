#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace dpr {

// Hex-encoded SHA-256.
std::string sha256_hex(std::string_view data);

// Stable digest of a provider request. The body is serialized through
// nlohmann::json, whose object dump is key-sorted, so two requests that
// differ only in field order digest identically. `kind` and `provider`
// are part of the key: a chat and a search request with the same payload
// never collide, and neither do two providers answering the same prompt.
std::string canonical_digest(std::string_view kind, std::string_view provider,
                             const nlohmann::json& body);

// Content-addressed rule id: "r" + first 12 hex chars of the digest of
// text and source URL. Stable across runs and platforms.
std::string rule_id_for(std::string_view text, std::string_view source_url);

}  // namespace dpr
