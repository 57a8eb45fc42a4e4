#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dpr/providers.hpp"

namespace dpr {

// Live providers speak HTTPS+JSON to configurable endpoints. The HTTP layer
// and the retry clock are injectable so request formatting and the retry
// policy are testable without a network.

struct HttpResponse {
    int status = 0;
    std::string body;
    bool transport_error = false;  // connection-level failure
};

using HttpTransport = std::function<HttpResponse(
    const std::string& base_url, const std::string& path,
    const std::string& body, const std::map<std::string, std::string>& headers)>;

using SleepFn = std::function<void(int milliseconds)>;

// POSTs via cpp-httplib.
HttpTransport default_transport();

// Retry policy shared by all live providers: at most 5 attempts, backoff
// doubling from 1s, retrying only rate limits (429) and transport-level or
// 5xx failures. Other HTTP errors surface immediately.
struct RetryPolicy {
    int max_attempts = 5;
    int initial_backoff_ms = 1000;
};

struct LiveEndpoint {
    std::string base_url;
    std::string model;        // chat/embed only
    std::string api_key;      // resolved from the environment by the caller
    std::string identity;     // digest key; defaults to the model name
};

// OpenAI-style /chat/completions endpoint.
class LiveChatProvider : public ChatProvider {
public:
    LiveChatProvider(LiveEndpoint endpoint, HttpTransport transport,
                     RetryPolicy retry = {}, SleepFn sleep = nullptr);
    std::string chat(const ChatRequest& request) override;
    std::string identity() const override { return endpoint_.identity; }

private:
    LiveEndpoint endpoint_;
    HttpTransport transport_;
    RetryPolicy retry_;
    SleepFn sleep_;
};

// Search endpoint in the serper.dev style: {"q": ..., "num": ...} in,
// {"organic": [{title, link, snippet}]} out.
class LiveSearchProvider : public SearchProvider {
public:
    LiveSearchProvider(LiveEndpoint endpoint, HttpTransport transport,
                       RetryPolicy retry = {}, SleepFn sleep = nullptr);
    std::vector<EvidenceSource> search(const SearchRequest& request) override;
    std::string identity() const override { return endpoint_.identity; }

private:
    LiveEndpoint endpoint_;
    HttpTransport transport_;
    RetryPolicy retry_;
    SleepFn sleep_;
};

// OpenAI-style /embeddings endpoint.
class LiveEmbeddingProvider : public EmbeddingProvider {
public:
    LiveEmbeddingProvider(LiveEndpoint endpoint, HttpTransport transport,
                          RetryPolicy retry = {}, SleepFn sleep = nullptr);
    std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) override;
    std::string identity() const override { return endpoint_.identity; }

private:
    LiveEndpoint endpoint_;
    HttpTransport transport_;
    RetryPolicy retry_;
    SleepFn sleep_;
};

}  // namespace dpr
