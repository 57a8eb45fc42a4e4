#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include "dpr/providers.hpp"

namespace dpr::testing {

inline std::filesystem::path fixture_dir() {
    return std::filesystem::path(DPR_FIXTURE_DIR);
}

// Scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::mt19937_64 rng(std::random_device{}());
        path = std::filesystem::temp_directory_path() /
               ("dpr-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

// Minimal function-backed providers for unit tests.
struct LambdaChat : ChatProvider {
    std::function<std::string(const ChatRequest&)> fn;
    std::string id = "lambda-chat";
    int calls = 0;

    explicit LambdaChat(std::function<std::string(const ChatRequest&)> f)
        : fn(std::move(f)) {}
    std::string chat(const ChatRequest& request) override {
        ++calls;
        return fn(request);
    }
    std::string identity() const override { return id; }
};

struct LambdaSearch : SearchProvider {
    std::function<std::vector<EvidenceSource>(const SearchRequest&)> fn;
    std::string id = "lambda-search";
    int calls = 0;

    explicit LambdaSearch(
        std::function<std::vector<EvidenceSource>(const SearchRequest&)> f)
        : fn(std::move(f)) {}
    std::vector<EvidenceSource> search(const SearchRequest& request) override {
        ++calls;
        return fn(request);
    }
    std::string identity() const override { return id; }
};

inline EvidenceSource make_source(const std::string& url,
                                  const std::string& title,
                                  const std::string& snippet,
                                  const std::string& query = "q") {
    EvidenceSource s;
    s.query = query;
    s.url = url;
    s.host = hostname_of(url);
    s.title = title;
    s.snippet = snippet;
    return s;
}

}  // namespace dpr::testing
