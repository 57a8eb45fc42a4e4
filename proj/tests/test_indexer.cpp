#include <doctest.h>

#include <memory>
#include <set>

#include "dpr/errors.hpp"
#include "dpr/indexer.hpp"
#include "dpr/render.hpp"
#include "support/test_util.hpp"

using namespace dpr;
using dpr::testing::LambdaChat;

namespace {

const DomainSpec kSpec{"harassment",
                       "Content that may be used to torment or annoy "
                       "individuals in real life, or make harassment more "
                       "likely to occur."};

Rule active_rule(const std::string& id, const std::string& text,
                 int iteration = 1) {
    Rule r;
    r.id = id;
    r.text = text;
    r.supporting_text = "quote";
    r.source_url = "https://s.org/" + id;
    r.relevance_score = 9;
    r.iteration_discovered = iteration;
    return r;
}

// Scripted chat for index building: keyphrase prompts answer with a word
// derived from the rule, titles and summaries are deterministic.
std::shared_ptr<LambdaChat> indexing_chat() {
    return std::make_shared<LambdaChat>([](const ChatRequest& request) {
        const std::string& p = request.prompt;
        if (p.find("write one keyphrase") != std::string::npos) {
            if (p.find("dog whistling") != std::string::npos)
                return std::string("dog whistling");
            if (p.find("doxxing") != std::string::npos)
                return std::string("doxxing");
            return std::string("generic phrase");
        }
        if (p.find("generate a title for this section") != std::string::npos) {
            if (p.find("dog whistling") != std::string::npos)
                return std::string("Dog Whistling & Coded Abuse");
            if (p.find("doxxing") != std::string::npos)
                return std::string("Doxxing");
            return std::string("Other Harassment Signals");
        }
        if (p.find("generate a short paragraph") != std::string::npos) {
            return std::string("Summary of this section.");
        }
        if (p.find("Combined section titles") != std::string::npos) {
            return std::string("[]");
        }
        FAIL("unexpected prompt: " << p.substr(0, 80));
        return std::string();
    });
}

}  // namespace

TEST_CASE("extract_keyphrase keeps the first non-empty line") {
    Rule rule = active_rule("r1", "Harassment may involve dog whistling.");
    LambdaChat chat([](const ChatRequest&) {
        return std::string("\n  dog whistling  \nsecond line");
    });
    CHECK(extract_keyphrase(rule, kSpec, chat) == "dog whistling");
}

TEST_CASE("empty keyphrase falls back to content words") {
    Rule rule = active_rule(
        "r1", "The use of coded words to signal abusers is harassment.");
    LambdaChat chat([](const ChatRequest&) { return std::string("  \n "); });
    CHECK(extract_keyphrase(rule, kSpec, chat) ==
          "use coded words signal abusers");
}

TEST_CASE("keyphrase fallback never yields an empty phrase") {
    CHECK_FALSE(keyphrase_fallback("of the to a").empty());
    CHECK(keyphrase_fallback("Doxxing exposes home addresses online quickly") ==
          "Doxxing exposes home addresses online");
}

TEST_CASE("title_section falls back to the most frequent keyphrase") {
    LambdaChat chat([](const ChatRequest&) { return std::string(""); });
    const std::string title = title_section(
        {"Rule A.", "Rule B.", "Rule C."},
        {"doxxing", "coded abuse", "doxxing"}, kSpec, chat);
    CHECK(title == "doxxing");
}

TEST_CASE("title_section takes the model title when present") {
    LambdaChat chat(
        [](const ChatRequest&) { return std::string("Dog Whistling & Coded Abuse\n"); });
    CHECK(title_section({"Rule."}, {"kp"}, kSpec, chat) ==
          "Dog Whistling & Coded Abuse");
}

TEST_CASE("summarize_section falls back to first sentences") {
    LambdaChat chat([](const ChatRequest&) { return std::string("   "); });
    CHECK(summarize_section({"First rule. More detail.", "Second rule."},
                            kSpec, chat) == "First rule. Second rule.");
}

TEST_CASE("merge_section_titles unions membership and re-summarizes") {
    std::vector<Rule> rules{active_rule("ra", "Threat rule one.", 1),
                            active_rule("rb", "Threat rule two.", 2),
                            active_rule("rc", "Other rule.", 1)};
    rules[0].keyphrase = "threats";
    rules[1].keyphrase = "threatening language";
    rules[2].keyphrase = "other";
    std::vector<Section> sections{
        {"Threats", "s1", {"ra"}, {"threats"}},
        {"Threatening Language", "s2", {"rb"}, {"threatening language"}},
        {"Other", "s3", {"rc"}, {"other"}},
    };
    LambdaChat chat([](const ChatRequest& request) {
        if (request.prompt.find("Combined section titles") != std::string::npos) {
            return std::string(
                R"([{"original_titles":["Threats","Threatening Language"],
                     "new_title":"Threats & Threatening Language"}])");
        }
        return std::string("merged summary");
    });

    merge_section_titles(sections, rules, kSpec, chat);
    REQUIRE(sections.size() == 2);
    CHECK(sections[0].title == "Threats & Threatening Language");
    CHECK(sections[0].rule_ids == std::vector<std::string>{"ra", "rb"});
    CHECK(sections[0].summary == "merged summary");
    CHECK(sections[1].title == "Other");
}

TEST_CASE("title merge directives are validated") {
    std::vector<Rule> rules{active_rule("ra", "A."), active_rule("rb", "B.")};
    rules[0].keyphrase = "a";
    rules[1].keyphrase = "b";
    std::vector<Section> sections{{"TA", "s1", {"ra"}, {"a"}},
                                  {"TB", "s2", {"rb"}, {"b"}}};
    const std::vector<Section> before = sections;

    SUBCASE("empty directive list is a no-op") {
        LambdaChat chat([](const ChatRequest&) { return std::string("[]"); });
        merge_section_titles(sections, rules, kSpec, chat);
        CHECK(sections == before);
    }
    SUBCASE("unknown title is ignored") {
        LambdaChat chat([](const ChatRequest&) {
            return std::string(
                R"([{"original_titles":["Nope","TB"],"new_title":"X"}])");
        });
        merge_section_titles(sections, rules, kSpec, chat);
        CHECK(sections == before);
    }
    SUBCASE("title equal to the domain description is rejected") {
        LambdaChat chat([](const ChatRequest&) {
            return std::string(R"([{"original_titles":["TA","TB"],"new_title":")") +
                   kSpec.definition + R"("}])";
        });
        merge_section_titles(sections, rules, kSpec, chat);
        CHECK(sections == before);
    }
    SUBCASE("unparseable response keeps sections") {
        LambdaChat chat([](const ChatRequest&) { return std::string("no"); });
        merge_section_titles(sections, rules, kSpec, chat);
        CHECK(sections == before);
    }
}

TEST_CASE("build_index partitions active rules into at most n sections") {
    std::vector<Rule> rules{
        active_rule("ra", "Rule about dog whistling signals.", 1),
        active_rule("rb", "Rule about doxxing home addresses.", 1),
        active_rule("rc", "Rule about doxxing phone numbers.", 2),
    };
    rules.push_back(active_rule("rd", "Merged-away rule.", 1));
    rules[3].status = RuleStatus::merged_away;
    rules[3].merged_into = "ra";

    Providers providers;
    auto chat = indexing_chat();
    providers.chat = chat;
    providers.embed = std::make_shared<HashEmbedder>(16, 7);

    ResearchConfig config;
    config.n = 20;
    config.rng_seed = 5;
    config.kmeans_restarts = 4;

    PolicyIndex index = build_index(rules, kSpec, config, 1, providers);
    CHECK(index.iteration == 1);
    CHECK(index.spec == kSpec);
    REQUIRE_FALSE(index.sections.empty());
    CHECK(index.sections.size() <= 3);

    // Partition property over the active rules.
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const Section& s : index.sections) {
        for (const std::string& id : s.rule_ids) {
            CHECK(seen.insert(id).second);
            ++total;
        }
        CHECK_FALSE(s.title.empty());
        CHECK_FALSE(s.summary.empty());
    }
    CHECK(total == 3);
    CHECK(seen == std::set<std::string>{"ra", "rb", "rc"});

    // Keyphrases were stored on the rules.
    CHECK(rules[0].keyphrase == "dog whistling");
    CHECK(rules[1].keyphrase == "doxxing");

    SUBCASE("identical inputs and seed give an identical index") {
        std::vector<Rule> rules2 = rules;
        PolicyIndex again = build_index(rules2, kSpec, config, 1, providers);
        CHECK(again == index);
    }
}

TEST_CASE("build_index with no active rules returns a bare index") {
    std::vector<Rule> rules;
    Providers providers;
    providers.chat = indexing_chat();
    providers.embed = std::make_shared<HashEmbedder>(16, 7);
    const PolicyIndex index =
        build_index(rules, kSpec, ResearchConfig{}, 2, providers);
    CHECK(index.sections.empty());
    CHECK(index.iteration == 2);
}
