#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpr {

// The human-written seed: a domain name plus a one-to-three-sentence
// definition of what the policy should cover.
struct DomainSpec {
    std::string name;
    std::string definition;

    bool operator==(const DomainSpec&) const = default;
};

enum class ChunkMode { snippet_only, full_page };

struct ResearchConfig {
    int k = 3;                           // research iterations
    int n = 20;                          // target cluster count
    int m = 5;                           // search results per query
    int relevance_threshold = 7;         // keep rules scoring >= this (0..10)
    int queries_per_iteration_cap = 8;
    ChunkMode chunk_mode = ChunkMode::snippet_only;
    int chunk_size = 2000;               // characters per evidence chunk
    std::uint64_t rng_seed = 0;
    int kmeans_restarts = 8;

    bool operator==(const ResearchConfig&) const = default;
};

// One search hit. `host` is the full hostname of the URL; grouping by
// registrable domain happens at reporting time.
struct EvidenceSource {
    std::string query;
    std::string url;
    std::string host;
    std::string title;
    std::string snippet;
    std::optional<std::string> fetched_body;
    int retrieved_at_iteration = 0;

    bool operator==(const EvidenceSource&) const = default;
};

enum class RuleStatus { active, merged_away };

struct Rule {
    std::string id;
    std::string text;                     // predicate-style statement
    std::string supporting_text;          // verbatim source quote
    std::string source_url;
    std::optional<int> relevance_score;   // 0..10; unset for merged rules
    int iteration_discovered = 0;
    RuleStatus status = RuleStatus::active;
    std::optional<std::string> merged_into;
    std::vector<std::string> merged_from;
    std::optional<std::string> keyphrase;

    bool operator==(const Rule&) const = default;
};

struct Section {
    std::string title;
    std::string summary;
    std::vector<std::string> rule_ids;    // ordered
    std::vector<std::string> keyphrases;

    bool operator==(const Section&) const = default;
};

// The indexed document I_i. Iteration 0 carries no sections and renders
// as the bare spec.
struct PolicyIndex {
    DomainSpec spec;
    std::vector<Section> sections;
    int iteration = 0;

    bool operator==(const PolicyIndex&) const = default;
};

struct IterationMetrics {
    int iteration = 0;
    int queries_issued = 0;
    int evidence_count = 0;
    int candidates_extracted = 0;
    int rules_after_filter = 0;
    int active_rule_count = 0;
    int cumulative_discovered_count = 0;
    int section_count = 0;

    bool operator==(const IterationMetrics&) const = default;
};

struct ResearchState {
    DomainSpec spec;
    ResearchConfig config;
    int iteration = 0;
    std::vector<EvidenceSource> evidence_log;
    std::vector<Rule> rules;              // active and merged-away
    PolicyIndex index;
    std::vector<IterationMetrics> metrics;

    bool operator==(const ResearchState&) const = default;
};

enum class Label { safe, unsafe };

struct EvalExample {
    std::string id;
    std::string content;
    std::vector<std::string> attachments;  // opaque media references
    Label gold_label = Label::safe;

    bool operator==(const EvalExample&) const = default;
};

enum class EvalMode { single_sample, majority_vote };

struct PerExampleJudgment {
    std::string example_id;
    std::vector<Label> samples;
    Label final_label = Label::safe;
    bool flagged = false;                 // a sample had no parseable verdict

    bool operator==(const PerExampleJudgment&) const = default;
};

struct EvalReport {
    std::string domain;
    EvalMode mode = EvalMode::single_sample;
    int tp = 0, fp = 0, fn = 0, tn = 0;
    int skipped = 0;
    double f1 = 0.0;
    std::vector<PerExampleJudgment> per_example;

    bool operator==(const EvalReport&) const = default;
};

// Throws EmptyField unless name and definition are both non-blank.
const DomainSpec& validate_spec(const DomainSpec& spec);

// Case-folded, whitespace-collapsed form used wherever rule texts are
// compared for duplication.
std::string normalize_rule_text(const std::string& text);

// Active rules in creation order.
std::vector<const Rule*> active_rules(const std::vector<Rule>& rules);
const Rule* find_rule(const std::vector<Rule>& rules, const std::string& id);

// Structural invariant checks; throw CorruptState with a description.
void check_partition(const ResearchState& state);
void check_lineage(const std::vector<Rule>& rules);

}  // namespace dpr
