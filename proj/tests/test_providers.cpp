#include <doctest.h>

#include <memory>

#include <nlohmann/json.hpp>

#include "dpr/errors.hpp"
#include "dpr/live_providers.hpp"
#include "dpr/providers.hpp"
#include "dpr/transcript.hpp"
#include "support/test_util.hpp"

using namespace dpr;
using dpr::testing::LambdaChat;
using dpr::testing::LambdaSearch;
using dpr::testing::TempDir;

TEST_CASE("replay chat serves the transcript verbatim and misses loudly") {
    auto store = std::make_shared<TranscriptStore>();
    const ChatRequest request{"list things", 0.0, 0};
    store->put(chat_digest(request, "fixture-chat"), "chat", "['a','b']");

    ReplayChatProvider replay(store, "fixture-chat");
    CHECK(replay.chat(request) == "['a','b']");
    CHECK_THROWS_AS(replay.chat(ChatRequest{"other prompt", 0.0, 0}),
                    ReplayMiss);
    CHECK_THROWS_AS(replay.chat(ChatRequest{"list things", 0.0, 1}),
                    ReplayMiss);
}

TEST_CASE("record then replay reproduces every response") {
    auto store = std::make_shared<TranscriptStore>();
    auto inner = std::make_shared<LambdaChat>(
        [](const ChatRequest& r) {
            return "echo:" + std::to_string(r.sample_index) + ":" + r.prompt;
        });
    inner->id = "mock-chat";
    RecordingChatProvider recorder(inner, store);
    const std::string live0 = recorder.chat(ChatRequest{"p", 0.8, 0});
    const std::string live1 = recorder.chat(ChatRequest{"p", 0.8, 1});

    TempDir tmp;
    store->save(tmp.path / "t.jsonl");
    auto loaded = std::make_shared<TranscriptStore>(
        TranscriptStore::load(tmp.path / "t.jsonl"));
    ReplayChatProvider replay(loaded, "mock-chat");
    CHECK(replay.chat(ChatRequest{"p", 0.8, 0}) == live0);
    CHECK(replay.chat(ChatRequest{"p", 0.8, 1}) == live1);
    CHECK(live0 != live1);
}

TEST_CASE("cache serves the second identical call without a provider hit") {
    TempDir tmp;
    auto inner = std::make_shared<LambdaChat>(
        [](const ChatRequest&) { return "expensive answer"; });
    auto cache = std::make_shared<ResponseCache>(tmp.path / "cache");
    CachingChatProvider cached(inner, cache);

    const ChatRequest request{"the prompt", 0.0, 0};
    CHECK(cached.chat(request) == "expensive answer");
    CHECK(cached.chat(request) == "expensive answer");
    CHECK(inner->calls == 1);

    // Distinct sample indices must not collide in the cache.
    cached.chat(ChatRequest{"the prompt", 0.0, 1});
    CHECK(inner->calls == 2);
}

TEST_CASE("search results pass through unpadded and undeduplicated") {
    LambdaSearch search([](const SearchRequest& r) {
        std::vector<EvidenceSource> out;
        if (r.query == "two results") {
            out.push_back(testing::make_source("https://a.org/1", "A", "sa"));
            out.push_back(testing::make_source("https://b.org/2", "B", "sb"));
        } else if (r.query == "dupes") {
            out.push_back(testing::make_source("https://a.org/1", "A", "sa"));
            out.push_back(testing::make_source("https://a.org/1", "A", "sa"));
        }
        return out;
    });

    CHECK(search.search(SearchRequest{"two results", 5}).size() == 2);
    CHECK(search.search(SearchRequest{"dupes", 5}).size() == 2);
}

TEST_CASE("hash embedder is deterministic and text-keyed") {
    HashEmbedder embedder(24, 1);
    const auto same = embedder.embed({"a", "a"});
    REQUIRE(same.size() == 2);
    CHECK(same[0] == same[1]);

    const auto different = embedder.embed({"a", "b"});
    CHECK(different[0] != different[1]);
    CHECK(different[0] == same[0]);  // call order does not matter

    std::vector<std::string> phrases;
    for (int i = 0; i < 20; ++i) {
        phrases.push_back("keyphrase " + std::to_string(i));
    }
    const auto batch = embedder.embed(phrases);
    REQUIRE(batch.size() == 20);
    for (const EmbeddingVector& v : batch) {
        CHECK(v.values.size() == 24);
    }
}

TEST_CASE("live chat formats the request and retries rate limits") {
    std::vector<int> sleeps;
    int attempts = 0;
    HttpTransport transport = [&](const std::string& base, const std::string& path,
                                  const std::string& body,
                                  const std::map<std::string, std::string>& headers) {
        ++attempts;
        CHECK(base == "https://llm.example");
        CHECK(path == "/chat/completions");
        CHECK(headers.at("Authorization") == "Bearer test-key");
        const auto j = nlohmann::json::parse(body);
        CHECK(j.at("model") == "research-model");
        CHECK(j.at("messages").at(0).at("content") == "hello");
        if (attempts <= 2) {
            return HttpResponse{429, "slow down", false};
        }
        return HttpResponse{
            200,
            R"({"choices":[{"message":{"content":"hi there"}}]})", false};
    };
    LiveChatProvider chat(
        LiveEndpoint{"https://llm.example", "research-model", "test-key", ""},
        transport, RetryPolicy{5, 1000}, [&](int ms) { sleeps.push_back(ms); });

    CHECK(chat.chat(ChatRequest{"hello", 0.0, 0}) == "hi there");
    CHECK(attempts == 3);
    CHECK(sleeps == std::vector<int>{1000, 2000});
}

TEST_CASE("persistent rate limiting surfaces after five attempts") {
    int attempts = 0;
    HttpTransport transport = [&](const std::string&, const std::string&,
                                  const std::string&,
                                  const std::map<std::string, std::string>&) {
        ++attempts;
        return HttpResponse{429, "", false};
    };
    LiveChatProvider chat(LiveEndpoint{"https://x", "m", "", ""}, transport,
                          RetryPolicy{5, 1}, [](int) {});
    CHECK_THROWS_AS(chat.chat(ChatRequest{"p", 0.0, 0}), RateLimited);
    CHECK(attempts == 5);
}

TEST_CASE("client errors do not retry") {
    int attempts = 0;
    HttpTransport transport = [&](const std::string&, const std::string&,
                                  const std::string&,
                                  const std::map<std::string, std::string>&) {
        ++attempts;
        return HttpResponse{404, "", false};
    };
    LiveChatProvider chat(LiveEndpoint{"https://x", "m", "", ""}, transport,
                          RetryPolicy{5, 1}, [](int) {});
    CHECK_THROWS_AS(chat.chat(ChatRequest{"p", 0.0, 0}), ProviderUnavailable);
    CHECK(attempts == 1);
}

TEST_CASE("live search maps organic hits and truncates to m") {
    HttpTransport transport = [](const std::string&, const std::string& path,
                                 const std::string& body,
                                 const std::map<std::string, std::string>&) {
        CHECK(path == "/search");
        CHECK(nlohmann::json::parse(body).at("q") ==
              "online harassment glossary of terms");
        return HttpResponse{200, R"({"organic":[
            {"title":"Glossary","link":"https://onlineharassmentfieldmanual.pen.org/g","snippet":"terms"},
            {"title":"Wiki","link":"https://en.wikipedia.org/wiki/Online_harassment","snippet":"overview"},
            {"title":"Extra","link":"https://c.org/3","snippet":"x"}]})",
                            false};
    };
    LiveSearchProvider search(LiveEndpoint{"https://s", "", "", ""}, transport,
                              RetryPolicy{5, 1}, [](int) {});
    const auto results =
        search.search(SearchRequest{"online harassment glossary of terms", 2});
    REQUIRE(results.size() == 2);
    CHECK(results[0].host == "onlineharassmentfieldmanual.pen.org");
    CHECK(results[0].query == "online harassment glossary of terms");
    CHECK(results[1].host == "en.wikipedia.org");
}

TEST_CASE("live embeddings validate shape") {
    HttpTransport transport = [](const std::string&, const std::string&,
                                 const std::string&,
                                 const std::map<std::string, std::string>&) {
        return HttpResponse{
            200, R"({"data":[{"embedding":[1.0,0.0]},{"embedding":[0.5]}]})",
            false};
    };
    LiveEmbeddingProvider embed(LiveEndpoint{"https://e", "emb", "", ""},
                                transport, RetryPolicy{5, 1}, [](int) {});
    CHECK_THROWS_AS(embed.embed({"a", "b"}), DimensionMismatch);
}

TEST_CASE("hostname and registrable domain extraction") {
    CHECK(hostname_of("https://www.Example.org/path?x=1") == "example.org");
    CHECK(hostname_of("https://en.wikipedia.org/wiki/X") == "en.wikipedia.org");
    CHECK(registrable_domain("en.wikipedia.org") == "wikipedia.org");
    CHECK(registrable_domain("onlineharassmentfieldmanual.pen.org") ==
          "pen.org");
    CHECK(registrable_domain("news.bbc.co.uk") == "bbc.co.uk");
    CHECK(registrable_domain("example.org") == "example.org");
    CHECK(strip_fragment("https://a.org/x#frag") == "https://a.org/x");
    CHECK(strip_fragment("https://a.org/x") == "https://a.org/x");
}

TEST_CASE("transcript rejects conflicting payloads for one digest") {
    TranscriptStore store;
    store.put("d1", "chat", "a");
    CHECK_NOTHROW(store.put("d1", "chat", "a"));
    CHECK_THROWS_AS(store.put("d1", "chat", "b"), Error);
}
