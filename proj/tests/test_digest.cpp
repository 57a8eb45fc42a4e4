#include <doctest.h>

#include <nlohmann/json.hpp>

#include "dpr/digest.hpp"
#include "dpr/providers.hpp"

using dpr::canonical_digest;

TEST_CASE("sha256 known vectors") {
    CHECK(dpr::sha256_hex("") ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(dpr::sha256_hex("abc") ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("digest is insensitive to serialized key order") {
    const auto a = nlohmann::json::parse(
        R"({"prompt":"p","temperature":0.5,"sample_index":2})");
    const auto b = nlohmann::json::parse(
        R"({"sample_index":2,"prompt":"p","temperature":0.5})");
    CHECK(canonical_digest("chat", "model-x", a) ==
          canonical_digest("chat", "model-x", b));
}

TEST_CASE("sample_index separates repeated samples") {
    dpr::ChatRequest first{"same prompt", 0.8, 0};
    dpr::ChatRequest second{"same prompt", 0.8, 1};
    CHECK(dpr::chat_digest(first, "m") != dpr::chat_digest(second, "m"));
}

TEST_CASE("kind and provider identity are part of the key") {
    const nlohmann::json body{{"query", "x"}};
    CHECK(canonical_digest("chat", "p", body) !=
          canonical_digest("search", "p", body));
    CHECK(canonical_digest("chat", "p1", body) !=
          canonical_digest("chat", "p2", body));
}

TEST_CASE("rule ids are stable and content-addressed") {
    const std::string id = dpr::rule_id_for("Some rule.", "https://a.org/x");
    CHECK(id == dpr::rule_id_for("Some rule.", "https://a.org/x"));
    CHECK(id.size() == 13);
    CHECK(id[0] == 'r');
    CHECK(id != dpr::rule_id_for("Some rule.", "https://b.org/x"));
    CHECK(id != dpr::rule_id_for("Another rule.", "https://a.org/x"));
}
