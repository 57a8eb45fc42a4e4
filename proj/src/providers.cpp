#include "dpr/providers.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include <nlohmann/json.hpp>

#include "dpr/digest.hpp"
#include "dpr/rng.hpp"

namespace dpr {

nlohmann::json chat_request_body(const ChatRequest& request) {
    return nlohmann::json{
        {"prompt", request.prompt},
        {"temperature", request.temperature},
        {"sample_index", request.sample_index},
    };
}

nlohmann::json search_request_body(const SearchRequest& request) {
    return nlohmann::json{{"query", request.query}, {"m", request.m}};
}

nlohmann::json embed_request_body(const std::vector<std::string>& texts) {
    return nlohmann::json{{"texts", texts}};
}

std::string chat_digest(const ChatRequest& request,
                        const std::string& provider) {
    return canonical_digest("chat", provider, chat_request_body(request));
}

std::string search_digest(const SearchRequest& request,
                          const std::string& provider) {
    return canonical_digest("search", provider, search_request_body(request));
}

std::string embed_digest(const std::vector<std::string>& texts,
                         const std::string& provider) {
    return canonical_digest("embed", provider, embed_request_body(texts));
}

std::string hostname_of(const std::string& url) {
    std::string rest = url;
    if (auto pos = rest.find("://"); pos != std::string::npos) {
        rest = rest.substr(pos + 3);
    }
    const std::size_t end = rest.find_first_of("/:?#");
    std::string host = rest.substr(0, end);
    std::transform(host.begin(), host.end(), host.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (host.rfind("www.", 0) == 0) {
        host = host.substr(4);
    }
    return host;
}

std::string registrable_domain(const std::string& host) {
    static const std::array<const char*, 8> second_level = {
        "co", "com", "org", "net", "gov", "ac", "edu", "or"};
    std::vector<std::string> labels;
    std::string cur;
    for (char c : host) {
        if (c == '.') {
            labels.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    labels.push_back(cur);
    if (labels.size() <= 2) {
        return host;
    }
    const std::string& middle = labels[labels.size() - 2];
    const bool two_part_tld =
        labels.back().size() == 2 &&
        std::find(second_level.begin(), second_level.end(), middle) !=
            second_level.end();
    const std::size_t keep = two_part_tld ? 3 : 2;
    std::string out;
    for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
        if (!out.empty()) out.push_back('.');
        out += labels[i];
    }
    return out;
}

std::string strip_fragment(const std::string& url) {
    const std::size_t pos = url.find('#');
    return pos == std::string::npos ? url : url.substr(0, pos);
}

HashEmbedder::HashEmbedder(int dimension, std::uint64_t seed)
    : dimension_(dimension),
      seed_(seed),
      identity_("hash-embedder-d" + std::to_string(dimension) + "-s" +
                std::to_string(seed)) {}

std::vector<EmbeddingVector> HashEmbedder::embed(
    const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        // FNV-1a over the text keys the stream; the seed separates
        // embedder instances.
        std::uint64_t h = 14695981039346656037ULL;
        for (unsigned char c : text) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        SplitMix64 rng(h ^ seed_);
        EmbeddingVector v;
        v.values.resize(static_cast<std::size_t>(dimension_));
        for (double& x : v.values) {
            x = 2.0 * rng.next_double() - 1.0;
        }
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace dpr
