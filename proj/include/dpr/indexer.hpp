#pragma once

#include <string>
#include <vector>

#include "dpr/providers.hpp"
#include "dpr/types.hpp"

namespace dpr {

// One keyphrase per rule, used as the clustering key. Falls back to the
// first five content words of the rule text when the model returns
// nothing, so downstream embedding never sees a blank.
std::string extract_keyphrase(const Rule& rule, const DomainSpec& spec,
                              ChatProvider& chat);
std::string keyphrase_fallback(const std::string& rule_text);

// Single-line section title; empty responses fall back to the most
// frequent member keyphrase.
std::string title_section(const std::vector<std::string>& member_texts,
                          const std::vector<std::string>& keyphrases,
                          const DomainSpec& spec, ChatProvider& chat);

// Short paragraph introducing a section; empty responses fall back to the
// concatenated first sentences of the members.
std::string summarize_section(const std::vector<std::string>& member_texts,
                              const DomainSpec& spec, ChatProvider& chat);

// Single merging pass over section titles. Applied directives union the
// member rule sets under the new title and re-summarize; directives whose
// combined title would restate the domain description are rejected, and
// directives naming unknown titles are ignored with a warning. A response
// that fails to parse leaves the sections unchanged.
void merge_section_titles(std::vector<Section>& sections,
                          const std::vector<Rule>& rules,
                          const DomainSpec& spec, ChatProvider& chat);

// Step 3 end to end: keyphrases for rules that lack one (stored on the
// rule), one batched embedding call, k-means into at most config.n
// sections, titling and summarizing each, then one title-merge pass.
// Sections are ordered by descending size with lexicographic title
// tie-break; rules within a section by (iteration_discovered, id).
PolicyIndex build_index(std::vector<Rule>& rules, const DomainSpec& spec,
                        const ResearchConfig& config, int iteration,
                        Providers& providers);

}  // namespace dpr
