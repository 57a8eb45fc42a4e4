#pragma once

#include <map>
#include <string>

namespace dpr::prompts {

// Prompt templates with named {placeholder} slots. They are the versioned
// contract between the pipeline and the research model; bump the version
// whenever any template text changes, since recorded transcripts key on
// the filled prompts.
extern const char* const kVersion;

extern const char* const kGenerateQueries;    // {research_goal} {current_datastore_summary}
extern const char* const kExtractRules;       // {research_goal} {webpage_chunk}
extern const char* const kScoreRelevance;     // {research_goal} {rule_text}
extern const char* const kExtractKeyphrase;   // {research_goal} {rule_text}
extern const char* const kMergeRules;         // {research_goal} {rule_text_list}
extern const char* const kSummarizeSection;   // {research_goal} {rule_text_list}
extern const char* const kTitleSection;       // {research_goal} {rule_text_list} {keyphrases_list}
extern const char* const kMergeSectionTitles; // {research_goal} {cluster_titles}
extern const char* const kJudgeExample;       // {policy} {content}

// Replaces every occurrence of "{key}" for each map entry. Only the given
// keys are touched, so literal braces elsewhere in a template survive.
std::string fill(const std::string& tmpl,
                 const std::map<std::string, std::string>& values);

}  // namespace dpr::prompts
