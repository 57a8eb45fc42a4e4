#include "dpr/digest.hpp"

#include <openssl/evp.h>

#include <array>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace dpr {

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(),
                   nullptr) != 1) {
        throw std::runtime_error("sha256: EVP_Digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 0xF]);
    }
    return out;
}

std::string canonical_digest(std::string_view kind, std::string_view provider,
                             const nlohmann::json& body) {
    nlohmann::json envelope{
        {"kind", kind},
        {"provider", provider},
        {"body", body},
    };
    return sha256_hex(envelope.dump());
}

std::string rule_id_for(std::string_view text, std::string_view source_url) {
    nlohmann::json body{{"text", text}, {"source_url", source_url}};
    return "r" + sha256_hex(body.dump()).substr(0, 12);
}

}  // namespace dpr
