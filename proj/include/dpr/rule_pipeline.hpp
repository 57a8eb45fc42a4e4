#pragma once

#include <string>
#include <vector>

#include "dpr/providers.hpp"
#include "dpr/types.hpp"

namespace dpr {

struct EvidenceChunk {
    std::string source_url;
    std::string text;
    int ordinal = 0;
};

struct CandidateRule {
    std::string text;
    std::string supporting_text;
    std::string source_url;

    bool operator==(const CandidateRule&) const = default;
};

struct ScoredCandidate {
    CandidateRule candidate;
    int score = 0;
};

struct MergeDirective {
    std::vector<std::string> original_items;
    std::string new_item;
};

// Splits one evidence source into extraction-sized chunks. snippet_only
// yields a single "title\nsnippet" chunk; full_page splits the fetched
// body at paragraph boundaries so that concatenating the pieces recovers
// the body byte for byte, and prepends the title to each piece. Throws
// EmptyEvidence when there is neither snippet nor body.
std::vector<EvidenceChunk> chunk_evidence(const EvidenceSource& source,
                                          const ResearchConfig& config);

// Asks the research model for candidate rules over one chunk. Records
// missing either required field are dropped; a response with no JSON array
// raises ParseFailure (the loop skips the chunk).
std::vector<CandidateRule> extract_rules(const EvidenceChunk& chunk,
                                         const DomainSpec& spec,
                                         ChatProvider& chat);

// Self-critique relevance on the 0-10 scale. Unparseable responses score
// 0: a rule can only enter the policy through an explicit judgment.
int score_relevance(const CandidateRule& candidate, const DomainSpec& spec,
                    ChatProvider& chat);

// Keeps candidates scoring at or above the threshold, dropping texts that
// duplicate (case- and whitespace-insensitively) an earlier candidate in
// the batch or an existing active rule.
std::vector<ScoredCandidate> filter_rules(
    const std::vector<ScoredCandidate>& scored, int threshold,
    const std::vector<Rule>& existing);

struct ConsolidationStats {
    int directives_applied = 0;
    int rules_merged_away = 0;
    int rules_created = 0;
};

// One merge pass over the active rules, batched to keep prompts bounded.
// Directives are applied in order: originals are marked merged_away with
// their lineage pointing at the merged rule; a single-original directive
// rewrites that rule in place of a merge. Directives naming texts that are
// not (or no longer) active are discarded with a warning. A batch whose
// response cannot be parsed passes through unmerged.
ConsolidationStats consolidate(std::vector<Rule>& rules, const DomainSpec& spec,
                               ChatProvider& chat, int current_iteration,
                               int batch_size = 30);

// "- " bulleted list used to splice rules and titles into prompts.
std::string bullet_list(const std::vector<std::string>& items);

// Content-addressed id for a new rule, suffixed on the rare collision with
// an id already present.
std::string unique_rule_id(const std::vector<Rule>& rules,
                           const std::string& text,
                           const std::string& source_url);

}  // namespace dpr
