#include "dpr/transcript.hpp"

#include <fstream>
#include <sstream>

#include "dpr/errors.hpp"
#include "dpr/json_io.hpp"
#include "dpr/state_io.hpp"

namespace dpr {

TranscriptStore TranscriptStore::load(const std::filesystem::path& file) {
    TranscriptStore store;
    std::istringstream in(read_text_file(file));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("digest") || !j.contains("kind") ||
            !j.contains("payload")) {
            throw CorruptState("transcript: malformed line " +
                               std::to_string(lineno));
        }
        store.entries_[j["digest"].get<std::string>()] =
            Entry{j["kind"].get<std::string>(), j["payload"]};
    }
    return store;
}

void TranscriptStore::save(const std::filesystem::path& file) const {
    std::lock_guard lock(mutex_);
    std::string out;
    for (const auto& [digest, entry] : entries_) {
        nlohmann::json j{
            {"digest", digest},
            {"kind", entry.kind},
            {"payload", entry.payload},
        };
        out += j.dump() + "\n";
    }
    write_text_file(file, out);
}

void TranscriptStore::put(const std::string& digest, const std::string& kind,
                          nlohmann::json payload) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(digest);
    if (it != entries_.end()) {
        if (it->second.payload != payload) {
            throw Error("transcript: conflicting payloads for digest " +
                        digest);
        }
        return;
    }
    entries_.emplace(digest, Entry{kind, std::move(payload)});
}

std::optional<nlohmann::json> TranscriptStore::get(
    const std::string& digest) const {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(digest);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return std::optional<nlohmann::json>(std::in_place, it->second.payload);
}

namespace {

[[noreturn]] void miss(const std::string& kind, const std::string& digest) {
    throw ReplayMiss("replay transcript has no " + kind +
                     " entry for digest " + digest);
}

}  // namespace

std::string ReplayChatProvider::chat(const ChatRequest& request) {
    const std::string digest = chat_digest(request, identity_);
    auto payload = store_->get(digest);
    if (!payload) miss("chat", digest);
    return payload->get<std::string>();
}

std::vector<EvidenceSource> ReplaySearchProvider::search(
    const SearchRequest& request) {
    const std::string digest = search_digest(request, identity_);
    auto payload = store_->get(digest);
    if (!payload) miss("search", digest);
    return sources_from_payload(*payload);
}

std::vector<EmbeddingVector> ReplayEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    const std::string digest = embed_digest(texts, identity_);
    auto payload = store_->get(digest);
    if (!payload) miss("embed", digest);
    return vectors_from_payload(*payload);
}

std::string RecordingChatProvider::chat(const ChatRequest& request) {
    std::string response = inner_->chat(request);
    store_->put(chat_digest(request, identity()), "chat", response);
    return response;
}

std::vector<EvidenceSource> RecordingSearchProvider::search(
    const SearchRequest& request) {
    auto sources = inner_->search(request);
    store_->put(search_digest(request, identity()), "search",
                sources_to_payload(sources));
    return sources;
}

std::vector<EmbeddingVector> RecordingEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    auto vectors = inner_->embed(texts);
    store_->put(embed_digest(texts, identity()), "embed",
                vectors_to_payload(vectors));
    return vectors;
}

ResponseCache::ResponseCache(std::filesystem::path dir)
    : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::optional<nlohmann::json> ResponseCache::lookup(
    const std::string& digest) const {
    const auto file = dir_ / (digest + ".json");
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(buf.str(), nullptr, false);
    if (j.is_discarded()) {
        return std::nullopt;  // damaged entry: fall through to the provider
    }
    return j;
}

void ResponseCache::store(const std::string& digest,
                          const nlohmann::json& payload) {
    std::lock_guard lock(write_mutex_);
    const auto tmp = dir_ / (digest + ".tmp");
    const auto file = dir_ / (digest + ".json");
    write_text_file(tmp, payload.dump());
    std::filesystem::rename(tmp, file);
}

std::string CachingChatProvider::chat(const ChatRequest& request) {
    const std::string digest = chat_digest(request, identity());
    if (auto hit = cache_->lookup(digest)) {
        return hit->get<std::string>();
    }
    std::string response = inner_->chat(request);
    cache_->store(digest, response);
    return response;
}

std::vector<EvidenceSource> CachingSearchProvider::search(
    const SearchRequest& request) {
    const std::string digest = search_digest(request, identity());
    if (auto hit = cache_->lookup(digest)) {
        return sources_from_payload(*hit);
    }
    auto sources = inner_->search(request);
    cache_->store(digest, sources_to_payload(sources));
    return sources;
}

std::vector<EmbeddingVector> CachingEmbeddingProvider::embed(
    const std::vector<std::string>& texts) {
    const std::string digest = embed_digest(texts, identity());
    if (auto hit = cache_->lookup(digest)) {
        return vectors_from_payload(*hit);
    }
    auto vectors = inner_->embed(texts);
    cache_->store(digest, vectors_to_payload(vectors));
    return vectors;
}

nlohmann::json sources_to_payload(const std::vector<EvidenceSource>& sources) {
    return nlohmann::json(sources);
}

std::vector<EvidenceSource> sources_from_payload(
    const nlohmann::json& payload) {
    return payload.get<std::vector<EvidenceSource>>();
}

nlohmann::json vectors_to_payload(const std::vector<EmbeddingVector>& vectors) {
    nlohmann::json j = nlohmann::json::array();
    for (const EmbeddingVector& v : vectors) {
        j.push_back(v.values);
    }
    return j;
}

std::vector<EmbeddingVector> vectors_from_payload(
    const nlohmann::json& payload) {
    std::vector<EmbeddingVector> out;
    for (const auto& item : payload) {
        out.push_back(EmbeddingVector{item.get<std::vector<double>>()});
    }
    return out;
}

}  // namespace dpr
