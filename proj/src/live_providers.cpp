#include "dpr/live_providers.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dpr/errors.hpp"

namespace dpr {

namespace {

HttpResponse post_once(const HttpTransport& transport,
                       const LiveEndpoint& endpoint, const std::string& path,
                       const std::string& body) {
    std::map<std::string, std::string> headers{
        {"Content-Type", "application/json"},
    };
    if (!endpoint.api_key.empty()) {
        headers["Authorization"] = "Bearer " + endpoint.api_key;
        headers["X-API-KEY"] = endpoint.api_key;
    }
    return transport(endpoint.base_url, path, body, headers);
}

// Runs the request under the retry policy and returns the response body.
std::string post_with_retry(const HttpTransport& transport,
                            const LiveEndpoint& endpoint,
                            const std::string& path, const std::string& body,
                            const RetryPolicy& retry, const SleepFn& sleep) {
    int backoff_ms = retry.initial_backoff_ms;
    for (int attempt = 1;; ++attempt) {
        HttpResponse resp = post_once(transport, endpoint, path, body);
        if (!resp.transport_error && resp.status == 200) {
            return resp.body;
        }
        const bool rate_limited = resp.status == 429;
        const bool transient = resp.transport_error || resp.status >= 500;
        if (!rate_limited && !transient) {
            throw ProviderUnavailable("provider returned HTTP " +
                                      std::to_string(resp.status) + " for " +
                                      path);
        }
        if (attempt >= retry.max_attempts) {
            if (rate_limited) {
                throw RateLimited("provider rate limited after " +
                                  std::to_string(attempt) + " attempts");
            }
            throw ProviderUnavailable("provider unavailable after " +
                                      std::to_string(attempt) + " attempts");
        }
        if (sleep) {
            sleep(backoff_ms);
        } else {
            std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        }
        backoff_ms *= 2;
    }
}

nlohmann::json parse_body(const std::string& body, const std::string& path) {
    nlohmann::json j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded()) {
        throw ProviderUnavailable("provider returned non-JSON body for " +
                                  path);
    }
    return j;
}

}  // namespace

HttpTransport default_transport() {
    return [](const std::string& base_url, const std::string& path,
              const std::string& body,
              const std::map<std::string, std::string>& headers) {
        httplib::Client client(base_url);
        client.set_connection_timeout(30);
        client.set_read_timeout(120);
        httplib::Headers hl;
        for (const auto& [k, v] : headers) {
            if (k != "Content-Type") hl.emplace(k, v);
        }
        auto result = client.Post(path, hl, body, "application/json");
        if (!result) {
            return HttpResponse{0, "", true};
        }
        return HttpResponse{result->status, result->body, false};
    };
}

LiveChatProvider::LiveChatProvider(LiveEndpoint endpoint,
                                   HttpTransport transport, RetryPolicy retry,
                                   SleepFn sleep)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      retry_(retry),
      sleep_(std::move(sleep)) {
    if (endpoint_.identity.empty()) {
        endpoint_.identity = endpoint_.model;
    }
}

std::string LiveChatProvider::chat(const ChatRequest& request) {
    nlohmann::json body{
        {"model", endpoint_.model},
        {"messages",
         nlohmann::json::array(
             {{{"role", "user"}, {"content", request.prompt}}})},
        {"temperature", request.temperature},
    };
    const std::string path = "/chat/completions";
    nlohmann::json j = parse_body(
        post_with_retry(transport_, endpoint_, path, body.dump(), retry_,
                        sleep_),
        path);
    try {
        return j.at("choices").at(0).at("message").at("content")
            .get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw ProviderUnavailable("chat response missing choices[0].message");
    }
}

LiveSearchProvider::LiveSearchProvider(LiveEndpoint endpoint,
                                       HttpTransport transport,
                                       RetryPolicy retry, SleepFn sleep)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      retry_(retry),
      sleep_(std::move(sleep)) {
    if (endpoint_.identity.empty()) {
        endpoint_.identity = "search:" + endpoint_.base_url;
    }
}

std::vector<EvidenceSource> LiveSearchProvider::search(
    const SearchRequest& request) {
    nlohmann::json body{{"q", request.query}, {"num", request.m}};
    const std::string path = "/search";
    nlohmann::json j = parse_body(
        post_with_retry(transport_, endpoint_, path, body.dump(), retry_,
                        sleep_),
        path);
    std::vector<EvidenceSource> out;
    if (!j.contains("organic") || !j["organic"].is_array()) {
        return out;
    }
    for (const auto& hit : j["organic"]) {
        if (static_cast<int>(out.size()) >= request.m) break;
        EvidenceSource source;
        source.query = request.query;
        source.url = hit.value("link", "");
        if (source.url.empty()) continue;
        source.host = hostname_of(source.url);
        source.title = hit.value("title", "");
        source.snippet = hit.value("snippet", "");
        out.push_back(std::move(source));
    }
    return out;
}

LiveEmbeddingProvider::LiveEmbeddingProvider(LiveEndpoint endpoint,
                                             HttpTransport transport,
                                             RetryPolicy retry, SleepFn sleep)
    : endpoint_(std::move(endpoint)),
      transport_(std::move(transport)),
      retry_(retry),
      sleep_(std::move(sleep)) {
    if (endpoint_.identity.empty()) {
        endpoint_.identity = endpoint_.model;
    }
}

std::vector<EmbeddingVector> LiveEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    nlohmann::json body{{"model", endpoint_.model}, {"input", texts}};
    const std::string path = "/embeddings";
    nlohmann::json j = parse_body(
        post_with_retry(transport_, endpoint_, path, body.dump(), retry_,
                        sleep_),
        path);
    std::vector<EmbeddingVector> out;
    try {
        for (const auto& item : j.at("data")) {
            out.push_back(
                EmbeddingVector{item.at("embedding").get<std::vector<double>>()});
        }
    } catch (const nlohmann::json::exception&) {
        throw ProviderUnavailable("embeddings response missing data[].embedding");
    }
    if (out.size() != texts.size()) {
        throw DimensionMismatch("embeddings: expected " +
                                std::to_string(texts.size()) + " vectors, got " +
                                std::to_string(out.size()));
    }
    for (const EmbeddingVector& v : out) {
        if (v.values.size() != out.front().values.size()) {
            throw DimensionMismatch("embeddings: inconsistent dimensions");
        }
    }
    return out;
}

}  // namespace dpr
