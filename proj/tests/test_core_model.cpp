#include <doctest.h>

#include <fstream>

#include "dpr/errors.hpp"
#include "dpr/render.hpp"
#include "dpr/state_io.hpp"
#include "dpr/types.hpp"
#include "support/test_util.hpp"

using namespace dpr;

namespace {

const DomainSpec kHarassment{
    "harassment",
    "Content that may be used to torment or annoy individuals in real life, "
    "or make harassment more likely to occur."};

Rule make_rule(const std::string& id, const std::string& text, int iteration,
               int score) {
    Rule r;
    r.id = id;
    r.text = text;
    r.supporting_text = "quote for " + id;
    r.source_url = "https://example.org/" + id;
    r.relevance_score = score;
    r.iteration_discovered = iteration;
    return r;
}

ResearchState small_state() {
    ResearchState state;
    state.spec = kHarassment;
    state.config.k = 3;
    state.config.m = 3;
    state.config.rng_seed = 7;
    state.iteration = 1;
    state.evidence_log.push_back(testing::make_source(
        "https://pen.org/glossary", "Glossary", "Dog whistling: ..."));
    state.evidence_log.back().retrieved_at_iteration = 1;
    state.rules.push_back(make_rule("r1", "Rule one.", 1, 8));
    state.rules.push_back(make_rule("r2", "Rule two.", 1, 9));
    Section s;
    s.title = "Coded Abuse";
    s.summary = "Rules about coded signals.";
    s.rule_ids = {"r1", "r2"};
    s.keyphrases = {"coded words", "signals"};
    state.index = PolicyIndex{kHarassment, {s}, 1};
    IterationMetrics m;
    m.iteration = 1;
    m.queries_issued = 2;
    m.evidence_count = 1;
    m.candidates_extracted = 3;
    m.rules_after_filter = 2;
    m.active_rule_count = 2;
    m.cumulative_discovered_count = 2;
    m.section_count = 1;
    state.metrics.push_back(m);
    return state;
}

}  // namespace

TEST_CASE("validate_spec accepts a real domain spec unchanged") {
    const DomainSpec sexual{
        "sexual",
        "Content meant to arouse sexual excitement, such as the description "
        "of sexual activity, or that promotes sexual services (excluding sex "
        "education and wellness)."};
    CHECK(validate_spec(sexual) == sexual);
}

TEST_CASE("validate_spec rejects blank fields") {
    CHECK_THROWS_AS(validate_spec(DomainSpec{"x", ""}), EmptyField);
    CHECK_THROWS_AS(validate_spec(DomainSpec{"", "d"}), EmptyField);
    CHECK_THROWS_AS(validate_spec(DomainSpec{"  ", "d"}), EmptyField);
}

TEST_CASE("seed-only index renders as header plus definition") {
    const PolicyIndex seed{kHarassment, {}, 0};
    const std::string doc = render_policy(seed, {});
    CHECK(doc == "# Policy: harassment\n\n" + kHarassment.definition + "\n");
    CHECK(doc == compress_index(seed));
}

TEST_CASE("one-section render matches the hand-written expectation") {
    std::vector<Rule> rules;
    rules.push_back(make_rule(
        "ra",
        "Sharing a private individual's home address without consent is "
        "harassment.",
        1, 9));
    rules.push_back(make_rule(
        "rb",
        "Publishing someone's phone number to encourage others to contact "
        "them is harassment.",
        1, 8));
    Section s;
    s.title = "Doxxing";
    s.summary =
        "Rules about exposing personal information to enable real-world "
        "harassment.";
    s.rule_ids = {"ra", "rb"};
    const PolicyIndex index{kHarassment, {s}, 1};

    const std::string expected =
        read_text_file(testing::fixture_dir() / "render_expected_basic.md");
    CHECK(render_policy(index, rules) == expected);
    CHECK(render_policy(index, rules) == render_policy(index, rules));
}

TEST_CASE("render fails on a section referencing a non-active rule") {
    std::vector<Rule> rules{make_rule("ra", "Text.", 1, 9)};
    rules[0].status = RuleStatus::merged_away;
    rules[0].merged_into = "rx";
    Section s;
    s.title = "T";
    s.summary = "S";
    s.rule_ids = {"ra"};
    const PolicyIndex index{kHarassment, {s}, 1};
    CHECK_THROWS_AS(render_policy(index, rules), DanglingRule);

    Section missing;
    missing.title = "T";
    missing.summary = "S";
    missing.rule_ids = {"nope"};
    const PolicyIndex index2{kHarassment, {missing}, 1};
    CHECK_THROWS_AS(render_policy(index2, {}), DanglingRule);
}

TEST_CASE("compress_index drops rule lists but keeps every title") {
    const ResearchState state = small_state();
    const std::string compressed = compress_index(state.index);
    CHECK(compressed.find("## Coded Abuse") != std::string::npos);
    CHECK(compressed.find("1.") == std::string::npos);
    CHECK(compressed.find("Rule one.") == std::string::npos);
}

TEST_CASE("state round trip is structurally equal") {
    const ResearchState state = small_state();
    CHECK(state_from_json_text(state_to_json_text(state)) == state);

    SUBCASE("fresh state") {
        ResearchState fresh;
        fresh.spec = kHarassment;
        fresh.index = PolicyIndex{kHarassment, {}, 0};
        CHECK(state_from_json_text(state_to_json_text(fresh)) == fresh);
    }
}

TEST_CASE("truncated state file is corrupt") {
    const std::string text = state_to_json_text(small_state());
    CHECK_THROWS_AS(state_from_json_text(text.substr(0, text.size() / 2)),
                    CorruptState);
    CHECK_THROWS_AS(state_from_json_text("not json at all"), CorruptState);
}

TEST_CASE("loading validates lineage and partition invariants") {
    ResearchState state = small_state();

    SUBCASE("section referencing merged-away rule") {
        state.rules[0].status = RuleStatus::merged_away;
        state.rules[0].merged_into = "r2";
        CHECK_THROWS_AS(state_from_json_text(state_to_json_text(state)),
                        CorruptState);
    }
    SUBCASE("merge cycle") {
        state.index.sections.clear();
        state.index.iteration = 0;
        state.rules[0].status = RuleStatus::merged_away;
        state.rules[0].merged_into = "r2";
        state.rules[1].status = RuleStatus::merged_away;
        state.rules[1].merged_into = "r1";
        CHECK_THROWS_AS(state_from_json_text(state_to_json_text(state)),
                        CorruptState);
    }
    SUBCASE("rule in two sections") {
        state.index.sections.push_back(state.index.sections[0]);
        CHECK_THROWS_AS(state_from_json_text(state_to_json_text(state)),
                        CorruptState);
    }
}

TEST_CASE("evidence log round trips through JSONL") {
    const ResearchState state = small_state();
    testing::TempDir tmp;
    const auto file = tmp.path / "evidence.jsonl";
    save_evidence_jsonl(state.evidence_log, file);
    CHECK(load_evidence_jsonl(file) == state.evidence_log);
}

TEST_CASE("metrics CSV has the exact column contract") {
    const ResearchState state = small_state();
    CHECK(metrics_to_csv(state.metrics) ==
          "iteration,queries_issued,evidence_count,candidates_extracted,"
          "rules_after_filter,active_rule_count,cumulative_discovered_count,"
          "section_count\n"
          "1,2,1,3,2,2,2,1\n");
}

TEST_CASE("normalize_rule_text folds case and whitespace") {
    CHECK(normalize_rule_text("  A   Rule\tText ") == "a rule text");
    CHECK(normalize_rule_text("a rule text") ==
          normalize_rule_text("A  RULE  TEXT"));
}
