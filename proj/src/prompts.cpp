#include "dpr/prompts.hpp"

namespace dpr::prompts {

const char* const kVersion = "v1";

const char* const kGenerateQueries =
    R"(You are an expert in creating domain-specific knowledge bases. Given a research goal and a summary of the current knowledge datastore, you write a few querqies to Google for additional knowledge insufficiently covered by the current knowledge datastore.

Your research goal is: {research_goal}.

The current datastore summary: {current_datastore_summary}.

Write a list of Google queries that would find webpages that expand the coverage of the datastore. The queries should be in the form of a json list of strings, each string being a query. The queries should be relevant to the research goal and aim to cover gaps in the datastore. The queries should be specific. The queries can either directly ask for a specific information or ask for information from specific source types, which increases the likelihood of finding the right webpages.

Queries (in json list format):)";

const char* const kExtractRules =
    R"(You are an expert in creating domain-specific knowledge bases. Given a research goal and content from Google, you summarize the relevant knowledge in the form of itemized rule.

Based on the following search results generate rules to represent the relevant knowledge.

Generate specific rules that:
1. Are directly extracted or derived from the search results provided.
2. Relevant to the research goal.
3. Cover different characteristics.
4. Are specific. Include any relevant nuances or edge cases mentioned.

VERY IMPORTANT: Your response MUST be a valid JSON array containing objects with these exact fields:
- "rule": the text of the rule
- "supporting_text": the exact quote from the passage that supports this rule

For example, your response should look exactly like this:
[
{
    "supporting_text": "Direct quote from the passage that supports the first rule",
    "rule": "Rule text goes here"
},
{
    "supporting_text": "Another direct quote that supports the second rule",
    "rule": "Another rule goes here"
}
]

Do not include any explanations, markdown formatting, or additional text before or after the JSON array.

### Your research goal:
{research_goal}

#### Search Result:
{webpage_chunk}

#### Rule (in json array format):)";

const char* const kScoreRelevance =
    R"(You are an expert in creating domain-specific knowledge bases. Given a research goal and a piece of new knowledge you wanted to add to the knowledge datastore, represented as a rule, judge the relevance of the rule. The rule is relevant if it can be added to the knowledge base that answers the research goal. If the rule is only broadly related to the research goal, uninformative to answering the question posed in the research goal, or in the wrong format (e.g., asking for an action when the research is about definition), it is not relevant. Return your answer in a json dict with a single key 'relevance' and the value on a scale from 0 (irrelevant) to 10 (perfectly relevant).

##### Research Goal: {research_goal}.


New knowledge (represented as a rule): {rule_text}


##### Is this knowledge relevant enough? Directly write your evaluation in a json dict and do not write anything else:)";

const char* const kExtractKeyphrase =
    R"(You are an expert in creating domain-specific knowledge bases. Given the domain description and an item in the knowledge base, write one keyphrase from the item. The keyphrase should identify the most salient information (concept or action) that distinguishs the item from the other items in the knowledge base. The information in domain description itself should not be in the keyphrase, because it is shared by all the items in the knowledge base.

##### Domain Description: {research_goal}.

##### Item: {rule_text}##### Keyphrase (a single phrase and nothing else):)";

const char* const kMergeRules =
    R"(You are an expert in creating domain-specific knowledge bases. Given a domain description and some items from the knowledge base, combine similar items to make the list more concise. Output a list of json dicts, each dict corresponding to an item after your processing. Each dict must have two fields. The first field is "original_items", a list of items you choose to combine, exactly copied from the original items, and "new_item" is a string for the processed items. You should not combine items that are dissimilar. For the items you combine, make sure you cover all the information in the new item but do not write very long sentences. Instead, write a few shorter sentences to make the semantics clear.

##### Domain description: {research_goal}.

##### Original items:
{rule_text_list}

##### Processed items (output json array of dicts and nothing else):)";

const char* const kSummarizeSection =
    R"(You are an expert in creating domain-specific knowledge bases. Given a domain description and some similar items that form a single section, generate a short paragraph to summarize the topic of these items. The summary should serve as a good introduction to this section in the database. You should take the domain description into account and the summary should distinguish the items from the other potential sections under the same domain.

##### Domain description: {research_goal}.

##### Section Items:
{rule_text_list}

##### Section Summary (just output the summary text and nothing else):)";

const char* const kTitleSection =
    R"(You are an expert in creating domain-specific knowledge bases. Given a domain description and some similar items that form a single section, as well as their associated keyphrases, generate a title for this section. You should take the domain description into account and the title should distinguish the items from the other potential sections under the same domain.

##### Domain description: {research_goal}.

##### Section Items:
{rule_text_list}

##### Keyphrases:
{keyphrases_list}

##### Section Title (just output the title text and nothing else):)";

const char* const kMergeSectionTitles =
    R"(You are an expert in creating domain-specific knowledge bases. Given the domain definition a list of section titles, combine them into a more concise list by merging titles with the same meaning. Output a list of json dicts, each dict corresponding to an item after your processing. Each dict must have two fields. The first field is "original_titles", a list of items you choose to combine, exactly copied from the original items, and "new_title" is a string for the processed items. You should only combine titles that are similar enough. If the combined title is so general that it is equivalent to the domain description, do not combine.

##### Domain description: {research_goal}.

##### Existing titles:
{cluster_titles}

##### Combined section titles (in json list format and nothing else):)";

const char* const kJudgeExample =
    R"(You are a content moderation assistant. Judge the content below against the policy.

##### Policy:
{policy}

##### Content:
{content}

##### Is the content safe or unsafe under this policy? Answer with exactly SAFE or UNSAFE:)";

std::string fill(const std::string& tmpl,
                 const std::map<std::string, std::string>& values) {
    std::string out = tmpl;
    for (const auto& [key, value] : values) {
        const std::string token = "{" + key + "}";
        std::size_t pos = 0;
        while ((pos = out.find(token, pos)) != std::string::npos) {
            out.replace(pos, token.size(), value);
            pos += value.size();
        }
    }
    return out;
}

}  // namespace dpr::prompts
