#include <doctest.h>

#include <nlohmann/json.hpp>

#include "dpr/errors.hpp"
#include "dpr/rule_pipeline.hpp"
#include "support/test_util.hpp"

using namespace dpr;
using dpr::testing::LambdaChat;

namespace {

const DomainSpec kSpec{"harassment",
                       "Content that may be used to torment or annoy "
                       "individuals in real life, or make harassment more "
                       "likely to occur."};

ResearchConfig snippet_config() {
    ResearchConfig c;
    c.chunk_mode = ChunkMode::snippet_only;
    return c;
}

Rule active_rule(const std::string& id, const std::string& text) {
    Rule r;
    r.id = id;
    r.text = text;
    r.supporting_text = "quote";
    r.source_url = "https://s.org/" + id;
    r.relevance_score = 9;
    r.iteration_discovered = 1;
    return r;
}

}  // namespace

TEST_CASE("snippet_only chunking concatenates title and snippet") {
    const auto source = testing::make_source("https://a.org/x", "T", "S");
    const auto chunks = chunk_evidence(source, snippet_config());
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].text == "T\nS");
    CHECK(chunks[0].source_url == "https://a.org/x");
    CHECK(chunks[0].ordinal == 0);
}

TEST_CASE("full_page chunking splits at paragraph breaks and re-joins") {
    ResearchConfig config;
    config.chunk_mode = ChunkMode::full_page;
    config.chunk_size = 2000;

    // ~5300 characters with paragraph breaks roughly every 440.
    std::string body;
    for (int p = 0; p < 12; ++p) {
        for (int i = 0; i < 7; ++i) {
            body += "Paragraph " + std::to_string(p) +
                    " sentence filler text that keeps going for a while. ";
        }
        body += "\n\n";
    }
    REQUIRE(body.size() > 4500);

    auto source = testing::make_source("https://a.org/long", "Title", "snip");
    source.fetched_body = body;
    const auto chunks = chunk_evidence(source, config);
    CHECK(chunks.size() == 3);

    std::string rejoined;
    for (const auto& chunk : chunks) {
        CHECK(chunk.text.rfind("Title\n", 0) == 0);
        const std::string piece = chunk.text.substr(6);
        CHECK(piece.size() <= 2000);
        rejoined += piece;
    }
    CHECK(rejoined == body);  // boundary oracle: nothing lost or reordered

    // Pieces end at paragraph boundaries except possibly the last.
    for (std::size_t i = 0; i + 1 < chunks.size(); ++i) {
        const std::string& text = chunks[i].text;
        CHECK(text.substr(text.size() - 2) == "\n\n");
    }
}

TEST_CASE("evidence with neither snippet nor body is rejected") {
    auto source = testing::make_source("https://a.org/x", "T", "");
    CHECK_THROWS_AS(chunk_evidence(source, snippet_config()), EmptyEvidence);

    source.fetched_body = "body text";
    CHECK(chunk_evidence(source, snippet_config()).size() == 1);
}

TEST_CASE("extract_rules parses records and attaches the source") {
    LambdaChat chat([](const ChatRequest& request) {
        CHECK(request.prompt.find("PEN chunk text") != std::string::npos);
        CHECK(request.prompt.find(kSpec.definition) != std::string::npos);
        CHECK(request.temperature == 0.0);
        return R"([{"rule":"R1","supporting_text":"Q1"},
                   {"rule":"R2"},
                   {"rule":"R3","supporting_text":"Q3","extra":1}])";
    });
    const EvidenceChunk chunk{"https://pen.org/g", "PEN chunk text", 0};
    const auto candidates = extract_rules(chunk, kSpec, chat);
    REQUIRE(candidates.size() == 2);
    CHECK(candidates[0] == CandidateRule{"R1", "Q1", "https://pen.org/g"});
    CHECK(candidates[1] == CandidateRule{"R3", "Q3", "https://pen.org/g"});
}

TEST_CASE("extract_rules on an empty array finds nothing") {
    LambdaChat chat([](const ChatRequest&) { return "[]"; });
    const EvidenceChunk chunk{"https://a.org", "text", 0};
    CHECK(extract_rules(chunk, kSpec, chat).empty());
}

TEST_CASE("extract_rules propagates ParseFailure") {
    LambdaChat chat([](const ChatRequest&) { return "no array here"; });
    const EvidenceChunk chunk{"https://a.org", "text", 0};
    CHECK_THROWS_AS(extract_rules(chunk, kSpec, chat), ParseFailure);
}

TEST_CASE("score_relevance clamps, rounds half-up, and rejects by default") {
    const CandidateRule candidate{"rule text", "quote", "https://a.org"};
    auto score_with = [&](const std::string& response) {
        LambdaChat chat([&](const ChatRequest&) { return response; });
        return score_relevance(candidate, kSpec, chat);
    };
    CHECK(score_with(R"({"relevance": 9})") == 9);
    CHECK(score_with(R"({"relevance": 15})") == 10);
    CHECK(score_with(R"({"relevance": -3})") == 0);
    CHECK(score_with(R"({"relevance": 2.5})") == 3);
    CHECK(score_with(R"({"relevance": 7.4})") == 7);
    CHECK(score_with("I think it is quite relevant.") == 0);
    CHECK(score_with(R"({"relevance": "high"})") == 0);
    CHECK(score_with(R"({"other": 9})") == 0);
}

TEST_CASE("filter_rules applies threshold and duplicate suppression") {
    std::vector<ScoredCandidate> scored{
        {{"Rule A", "q", "u1"}, 9},
        {{"Rule B", "q", "u2"}, 7},
        {{"Rule C", "q", "u3"}, 3},
        {{"rule  a", "q", "u4"}, 8},   // duplicate of A after normalization
        {{"Existing rule", "q", "u5"}, 10},
    };
    std::vector<Rule> existing{active_rule("r0", "Existing Rule")};

    const auto accepted = filter_rules(scored, 7, existing);
    REQUIRE(accepted.size() == 2);
    CHECK(accepted[0].candidate.text == "Rule A");
    CHECK(accepted[1].candidate.text == "Rule B");

    CHECK(filter_rules({}, 7, existing).empty());
}

TEST_CASE("consolidate merges two rules under a directive") {
    std::vector<Rule> rules{active_rule("ra", "Rule about doxxing."),
                            active_rule("rb", "Rule about doxing."),
                            active_rule("rc", "Unrelated rule.")};
    LambdaChat chat([](const ChatRequest& request) {
        CHECK(request.prompt.find("- Rule about doxxing.") !=
              std::string::npos);
        return R"([{"original_items":["Rule about doxxing.","Rule about doxing."],
                    "new_item":"Rules about doxing in either spelling."}])";
    });

    const auto stats = consolidate(rules, kSpec, chat, 2);
    CHECK(stats.directives_applied == 1);
    CHECK(stats.rules_merged_away == 2);
    CHECK(stats.rules_created == 1);
    REQUIRE(rules.size() == 4);

    const Rule& merged = rules[3];
    CHECK(merged.status == RuleStatus::active);
    CHECK(merged.text == "Rules about doxing in either spelling.");
    CHECK(merged.iteration_discovered == 2);
    CHECK(merged.merged_from == std::vector<std::string>{"ra", "rb"});
    CHECK_FALSE(merged.relevance_score.has_value());
    CHECK(rules[0].status == RuleStatus::merged_away);
    CHECK(*rules[0].merged_into == merged.id);
    CHECK(rules[1].status == RuleStatus::merged_away);
    CHECK(*rules[1].merged_into == merged.id);
    CHECK(rules[2].status == RuleStatus::active);

    check_lineage(rules);  // forest invariant holds after the merge

    // Accounting: every input rule is still present, active or merged away.
    int active = 0, merged_away = 0;
    for (const Rule& r : rules) {
        (r.status == RuleStatus::active ? active : merged_away) += 1;
    }
    CHECK(active == 2);
    CHECK(merged_away == 2);
}

TEST_CASE("single-original directive rewrites in place of merging") {
    std::vector<Rule> rules{active_rule("ra", "Awkward wording.")};
    LambdaChat chat([](const ChatRequest&) {
        return R"([{"original_items":["Awkward wording."],
                    "new_item":"Clear wording."}])";
    });
    consolidate(rules, kSpec, chat, 3);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].status == RuleStatus::merged_away);
    CHECK(rules[1].text == "Clear wording.");
    CHECK(rules[1].relevance_score == 9);  // rewrite keeps the judgment
    CHECK(rules[1].merged_from == std::vector<std::string>{"ra"});
}

TEST_CASE("directives covering no known items leave the rule set unchanged") {
    std::vector<Rule> rules{active_rule("ra", "A."), active_rule("rb", "B.")};
    const std::vector<Rule> before = rules;

    SUBCASE("empty directive list") {
        LambdaChat chat([](const ChatRequest&) { return "[]"; });
        consolidate(rules, kSpec, chat, 2);
        CHECK(rules == before);
    }
    SUBCASE("unknown original text") {
        LambdaChat chat([](const ChatRequest&) {
            return R"([{"original_items":["Nope."],"new_item":"X."}])";
        });
        consolidate(rules, kSpec, chat, 2);
        CHECK(rules == before);
    }
    SUBCASE("unparseable response") {
        LambdaChat chat([](const ChatRequest&) { return "cannot comply"; });
        consolidate(rules, kSpec, chat, 2);
        CHECK(rules == before);
    }
}

TEST_CASE("merging into an existing active rule reuses it") {
    std::vector<Rule> rules{active_rule("ra", "Keep me."),
                            active_rule("rb", "Redundant copy.")};
    LambdaChat chat([](const ChatRequest&) {
        return R"([{"original_items":["Keep me.","Redundant copy."],
                    "new_item":"Keep me."}])";
    });
    consolidate(rules, kSpec, chat, 2);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].status == RuleStatus::active);
    CHECK(rules[1].status == RuleStatus::merged_away);
    CHECK(*rules[1].merged_into == "ra");
    CHECK(rules[0].merged_from == std::vector<std::string>{"rb"});
}

TEST_CASE("consolidation batches long rule lists") {
    std::vector<Rule> rules;
    for (int i = 0; i < 70; ++i) {
        rules.push_back(active_rule("r" + std::to_string(i),
                                    "Rule number " + std::to_string(i) + "."));
    }
    LambdaChat chat([](const ChatRequest&) { return "[]"; });
    consolidate(rules, kSpec, chat, 1, 30);
    CHECK(chat.calls == 3);  // 30 + 30 + 10
}
