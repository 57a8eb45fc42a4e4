#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dpr/types.hpp"

namespace dpr {

struct ChatRequest {
    std::string prompt;
    double temperature = 0.0;
    // Distinguishes repeated samples at the same prompt/temperature so the
    // cache and transcript hold one entry per sample.
    int sample_index = 0;
};

struct SearchRequest {
    std::string query;
    int m = 5;
};

struct EmbeddingVector {
    std::vector<double> values;

    bool operator==(const EmbeddingVector&) const = default;
};

// Uniform interfaces to the three external capabilities. `identity()` is a
// stable string naming the backing model/endpoint; it is part of every
// request digest.
class ChatProvider {
public:
    virtual ~ChatProvider() = default;
    virtual std::string chat(const ChatRequest& request) = 0;
    virtual std::string identity() const = 0;
};

class SearchProvider {
public:
    virtual ~SearchProvider() = default;
    // Results carry query, url, host, title, snippet in provider order;
    // retrieved_at_iteration is stamped by the research loop.
    virtual std::vector<EvidenceSource> search(const SearchRequest& request) = 0;
    virtual std::string identity() const = 0;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    // One vector per input text, all of one dimension.
    virtual std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) = 0;
    virtual std::string identity() const = 0;
};

struct Providers {
    std::shared_ptr<ChatProvider> chat;
    std::shared_ptr<SearchProvider> search;
    std::shared_ptr<EmbeddingProvider> embed;
};

nlohmann::json chat_request_body(const ChatRequest& request);
nlohmann::json search_request_body(const SearchRequest& request);
nlohmann::json embed_request_body(const std::vector<std::string>& texts);

std::string chat_digest(const ChatRequest& request, const std::string& provider);
std::string search_digest(const SearchRequest& request,
                          const std::string& provider);
std::string embed_digest(const std::vector<std::string>& texts,
                         const std::string& provider);

// Full hostname of a URL, lowercased, without a leading "www.".
std::string hostname_of(const std::string& url);

// Pragmatic registrable domain: last two labels, or three when the middle
// label is a well-known second-level registry (co.uk, com.au, ...).
std::string registrable_domain(const std::string& host);

// URL with any #fragment removed; the dedup key for evidence.
std::string strip_fragment(const std::string& url);

// Deterministic embedder used by tests and offline runs: vector entries
// are derived from a hash of the text and the provider seed, so equal
// texts embed equally and the output never depends on call order.
class HashEmbedder : public EmbeddingProvider {
public:
    explicit HashEmbedder(int dimension = 24, std::uint64_t seed = 1);
    std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) override;
    std::string identity() const override { return identity_; }

private:
    int dimension_;
    std::uint64_t seed_;
    std::string identity_;
};

}  // namespace dpr
