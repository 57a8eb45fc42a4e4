#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "dpr/providers.hpp"

namespace dpr {

// A transcript maps canonical request digests to recorded payloads:
// chat -> string, search -> array of sources, embed -> array of vectors.
// Stored as JSONL of {"digest","kind","payload"} entries, sorted by digest
// on save so a re-recorded identical run diffs clean.
class TranscriptStore {
public:
    TranscriptStore() = default;
    TranscriptStore(TranscriptStore&& other) {
        std::lock_guard lock(other.mutex_);
        entries_ = std::move(other.entries_);
    }

    static TranscriptStore load(const std::filesystem::path& file);
    void save(const std::filesystem::path& file) const;

    void put(const std::string& digest, const std::string& kind,
             nlohmann::json payload);
    std::optional<nlohmann::json> get(const std::string& digest) const;

    std::size_t size() const { return entries_.size(); }

private:
    struct Entry {
        std::string kind;
        nlohmann::json payload;
    };
    std::map<std::string, Entry> entries_;
    mutable std::mutex mutex_;
};

// Replay providers answer from the transcript alone and never touch the
// network; an absent entry raises ReplayMiss.
class ReplayChatProvider : public ChatProvider {
public:
    ReplayChatProvider(std::shared_ptr<TranscriptStore> store,
                       std::string identity)
        : store_(std::move(store)), identity_(std::move(identity)) {}
    std::string chat(const ChatRequest& request) override;
    std::string identity() const override { return identity_; }

private:
    std::shared_ptr<TranscriptStore> store_;
    std::string identity_;
};

class ReplaySearchProvider : public SearchProvider {
public:
    ReplaySearchProvider(std::shared_ptr<TranscriptStore> store,
                         std::string identity)
        : store_(std::move(store)), identity_(std::move(identity)) {}
    std::vector<EvidenceSource> search(const SearchRequest& request) override;
    std::string identity() const override { return identity_; }

private:
    std::shared_ptr<TranscriptStore> store_;
    std::string identity_;
};

class ReplayEmbeddingProvider : public EmbeddingProvider {
public:
    ReplayEmbeddingProvider(std::shared_ptr<TranscriptStore> store,
                            std::string identity)
        : store_(std::move(store)), identity_(std::move(identity)) {}
    std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) override;
    std::string identity() const override { return identity_; }

private:
    std::shared_ptr<TranscriptStore> store_;
    std::string identity_;
};

// Recording providers pass through to an inner provider and append every
// response to the transcript.
class RecordingChatProvider : public ChatProvider {
public:
    RecordingChatProvider(std::shared_ptr<ChatProvider> inner,
                          std::shared_ptr<TranscriptStore> store)
        : inner_(std::move(inner)), store_(std::move(store)) {}
    std::string chat(const ChatRequest& request) override;
    std::string identity() const override { return inner_->identity(); }

private:
    std::shared_ptr<ChatProvider> inner_;
    std::shared_ptr<TranscriptStore> store_;
};

class RecordingSearchProvider : public SearchProvider {
public:
    RecordingSearchProvider(std::shared_ptr<SearchProvider> inner,
                            std::shared_ptr<TranscriptStore> store)
        : inner_(std::move(inner)), store_(std::move(store)) {}
    std::vector<EvidenceSource> search(const SearchRequest& request) override;
    std::string identity() const override { return inner_->identity(); }

private:
    std::shared_ptr<SearchProvider> inner_;
    std::shared_ptr<TranscriptStore> store_;
};

class RecordingEmbeddingProvider : public EmbeddingProvider {
public:
    RecordingEmbeddingProvider(std::shared_ptr<EmbeddingProvider> inner,
                               std::shared_ptr<TranscriptStore> store)
        : inner_(std::move(inner)), store_(std::move(store)) {}
    std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) override;
    std::string identity() const override { return inner_->identity(); }

private:
    std::shared_ptr<EmbeddingProvider> inner_;
    std::shared_ptr<TranscriptStore> store_;
};

// On-disk response cache, one content-addressed file per request digest.
// Reads race freely; writes go through a temp file + rename.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);
    std::optional<nlohmann::json> lookup(const std::string& digest) const;
    void store(const std::string& digest, const nlohmann::json& payload);

private:
    std::filesystem::path dir_;
    std::mutex write_mutex_;
};

class CachingChatProvider : public ChatProvider {
public:
    CachingChatProvider(std::shared_ptr<ChatProvider> inner,
                        std::shared_ptr<ResponseCache> cache)
        : inner_(std::move(inner)), cache_(std::move(cache)) {}
    std::string chat(const ChatRequest& request) override;
    std::string identity() const override { return inner_->identity(); }

private:
    std::shared_ptr<ChatProvider> inner_;
    std::shared_ptr<ResponseCache> cache_;
};

class CachingSearchProvider : public SearchProvider {
public:
    CachingSearchProvider(std::shared_ptr<SearchProvider> inner,
                          std::shared_ptr<ResponseCache> cache)
        : inner_(std::move(inner)), cache_(std::move(cache)) {}
    std::vector<EvidenceSource> search(const SearchRequest& request) override;
    std::string identity() const override { return inner_->identity(); }

private:
    std::shared_ptr<SearchProvider> inner_;
    std::shared_ptr<ResponseCache> cache_;
};

class CachingEmbeddingProvider : public EmbeddingProvider {
public:
    CachingEmbeddingProvider(std::shared_ptr<EmbeddingProvider> inner,
                             std::shared_ptr<ResponseCache> cache)
        : inner_(std::move(inner)), cache_(std::move(cache)) {}
    std::vector<EmbeddingVector> embed(
        const std::vector<std::string>& texts) override;
    std::string identity() const override { return inner_->identity(); }

private:
    std::shared_ptr<EmbeddingProvider> inner_;
    std::shared_ptr<ResponseCache> cache_;
};

nlohmann::json sources_to_payload(const std::vector<EvidenceSource>& sources);
std::vector<EvidenceSource> sources_from_payload(const nlohmann::json& payload);
nlohmann::json vectors_to_payload(const std::vector<EmbeddingVector>& vectors);
std::vector<EmbeddingVector> vectors_from_payload(
    const nlohmann::json& payload);

}  // namespace dpr
