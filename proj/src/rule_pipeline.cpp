#include "dpr/rule_pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dpr/digest.hpp"
#include "dpr/errors.hpp"
#include "dpr/json_repair.hpp"
#include "dpr/prompts.hpp"

namespace dpr {

namespace {

std::string with_title(const std::string& title, const std::string& body,
                       int chunk_size) {
    if (title.empty() ||
        static_cast<int>(title.size()) + 1 >= chunk_size) {
        return body;
    }
    return title + "\n" + body;
}

// Largest prefix of `remaining` that fits the budget, preferring to cut
// just after a paragraph break so pieces re-join losslessly.
std::size_t cut_point(const std::string& body, std::size_t start,
                      std::size_t budget) {
    if (body.size() - start <= budget) {
        return body.size();
    }
    const std::size_t window_end = start + budget;
    const std::size_t brk = body.rfind("\n\n", window_end - 1);
    if (brk != std::string::npos && brk > start) {
        return brk + 2;  // separator stays with the preceding piece
    }
    return window_end;
}

}  // namespace

std::vector<EvidenceChunk> chunk_evidence(const EvidenceSource& source,
                                          const ResearchConfig& config) {
    const bool has_snippet = !source.snippet.empty();
    const bool has_body =
        source.fetched_body.has_value() && !source.fetched_body->empty();
    if (!has_snippet && !has_body) {
        throw EmptyEvidence("evidence " + source.url +
                            " has neither snippet nor fetched body");
    }

    std::vector<EvidenceChunk> chunks;
    if (config.chunk_mode == ChunkMode::snippet_only || !has_body) {
        const std::string& body = has_snippet ? source.snippet : *source.fetched_body;
        chunks.push_back(EvidenceChunk{
            source.url, with_title(source.title, body, config.chunk_size), 0});
        return chunks;
    }

    const std::string& body = *source.fetched_body;
    std::size_t budget = static_cast<std::size_t>(config.chunk_size);
    if (!source.title.empty() &&
        static_cast<int>(source.title.size()) + 1 < config.chunk_size) {
        budget -= source.title.size() + 1;
    }
    int ordinal = 0;
    std::size_t start = 0;
    while (start < body.size()) {
        const std::size_t end = cut_point(body, start, budget);
        chunks.push_back(EvidenceChunk{
            source.url,
            with_title(source.title, body.substr(start, end - start),
                       config.chunk_size),
            ordinal++});
        start = end;
    }
    return chunks;
}

std::vector<CandidateRule> extract_rules(const EvidenceChunk& chunk,
                                         const DomainSpec& spec,
                                         ChatProvider& chat) {
    const std::string prompt = prompts::fill(
        prompts::kExtractRules, {{"research_goal", spec.definition},
                                 {"webpage_chunk", chunk.text}});
    const std::string response = chat.chat(ChatRequest{prompt, 0.0, 0});
    const auto records =
        filter_records(parse_json_array(response), {"rule", "supporting_text"});
    std::vector<CandidateRule> out;
    out.reserve(records.size());
    for (const auto& record : records) {
        out.push_back(CandidateRule{record.at("rule").get<std::string>(),
                                    record.at("supporting_text").get<std::string>(),
                                    chunk.source_url});
    }
    return out;
}

int score_relevance(const CandidateRule& candidate, const DomainSpec& spec,
                    ChatProvider& chat) {
    const std::string prompt = prompts::fill(
        prompts::kScoreRelevance, {{"research_goal", spec.definition},
                                   {"rule_text", candidate.text}});
    const std::string response = chat.chat(ChatRequest{prompt, 0.0, 0});
    try {
        const nlohmann::json j = parse_json_object(response);
        auto it = j.find("relevance");
        if (it == j.end() || !it->is_number()) {
            return 0;
        }
        const double v = it->get<double>();
        const int rounded = static_cast<int>(std::floor(v + 0.5));
        return std::min(10, std::max(0, rounded));
    } catch (const ParseFailure&) {
        return 0;  // reject by default
    }
}

std::vector<ScoredCandidate> filter_rules(
    const std::vector<ScoredCandidate>& scored, int threshold,
    const std::vector<Rule>& existing) {
    std::unordered_set<std::string> taken;
    for (const Rule& r : existing) {
        if (r.status == RuleStatus::active) {
            taken.insert(normalize_rule_text(r.text));
        }
    }
    std::vector<ScoredCandidate> out;
    for (const ScoredCandidate& sc : scored) {
        if (sc.score < threshold) {
            continue;
        }
        const std::string key = normalize_rule_text(sc.candidate.text);
        if (key.empty() || !taken.insert(key).second) {
            continue;
        }
        out.push_back(sc);
    }
    return out;
}

namespace {

std::vector<MergeDirective> parse_directives(const std::string& response) {
    std::vector<MergeDirective> out;
    const auto array = parse_json_array(response);
    for (const auto& item : array) {
        if (!item.is_object() || !item.contains("original_items") ||
            !item.contains("new_item") || !item["original_items"].is_array() ||
            !item["new_item"].is_string()) {
            std::fprintf(stderr, "warn: skipping malformed merge directive\n");
            continue;
        }
        MergeDirective d;
        d.new_item = trim_copy(item["new_item"].get<std::string>());
        for (const auto& orig : item["original_items"]) {
            if (orig.is_string()) {
                d.original_items.push_back(orig.get<std::string>());
            }
        }
        if (d.original_items.empty() || d.new_item.empty()) {
            std::fprintf(stderr, "warn: skipping empty merge directive\n");
            continue;
        }
        out.push_back(std::move(d));
    }
    return out;
}

void apply_directive(std::vector<Rule>& rules, const MergeDirective& directive,
                     int current_iteration, ConsolidationStats& stats) {
    // Every original must name a currently active rule, exactly.
    std::vector<std::size_t> originals;
    for (const std::string& text : directive.original_items) {
        bool found = false;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            if (rules[i].status == RuleStatus::active && rules[i].text == text) {
                originals.push_back(i);
                found = true;
                break;
            }
        }
        if (!found) {
            std::fprintf(stderr,
                         "warn: merge directive references unknown rule text, "
                         "ignored: %.60s\n",
                         text.c_str());
            return;
        }
    }

    const std::string new_key = normalize_rule_text(directive.new_item);

    // If the merged text already names an active rule, that rule survives
    // and simply absorbs the other originals.
    std::size_t survivor = rules.size();
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (rules[i].status == RuleStatus::active &&
            normalize_rule_text(rules[i].text) == new_key) {
            survivor = i;
            break;
        }
    }

    if (survivor == rules.size()) {
        if (originals.size() == 1 &&
            normalize_rule_text(rules[originals[0]].text) == new_key) {
            return;  // rewrite to identical text: nothing to do
        }
        Rule merged;
        merged.text = directive.new_item;
        merged.source_url = rules[originals[0]].source_url;
        merged.iteration_discovered = current_iteration;
        if (originals.size() == 1) {
            // Rewrite: same rule, new wording; the judgment carries over.
            merged.supporting_text = rules[originals[0]].supporting_text;
            merged.relevance_score = rules[originals[0]].relevance_score;
        }
        merged.id = unique_rule_id(rules, merged.text, merged.source_url);
        rules.push_back(std::move(merged));
        survivor = rules.size() - 1;
        stats.rules_created += 1;
    }

    const std::string survivor_id = rules[survivor].id;
    for (std::size_t i : originals) {
        if (i == survivor) {
            continue;
        }
        rules[i].status = RuleStatus::merged_away;
        rules[i].merged_into = survivor_id;
        rules[survivor].merged_from.push_back(rules[i].id);
        stats.rules_merged_away += 1;
    }
    stats.directives_applied += 1;
}

}  // namespace

ConsolidationStats consolidate(std::vector<Rule>& rules,
                               const DomainSpec& spec, ChatProvider& chat,
                               int current_iteration, int batch_size) {
    ConsolidationStats stats;
    // Snapshot the active texts up front; batches are windows over it.
    std::vector<std::string> texts;
    for (const Rule& r : rules) {
        if (r.status == RuleStatus::active) {
            texts.push_back(r.text);
        }
    }
    if (texts.empty()) {
        return stats;
    }
    for (std::size_t begin = 0; begin < texts.size();
         begin += static_cast<std::size_t>(batch_size)) {
        const std::size_t end =
            std::min(texts.size(), begin + static_cast<std::size_t>(batch_size));
        const std::vector<std::string> batch(texts.begin() + begin,
                                             texts.begin() + end);
        const std::string prompt = prompts::fill(
            prompts::kMergeRules, {{"research_goal", spec.definition},
                                   {"rule_text_list", bullet_list(batch)}});
        std::string response;
        try {
            response = chat.chat(ChatRequest{prompt, 0.0, 0});
            for (const MergeDirective& d : parse_directives(response)) {
                apply_directive(rules, d, current_iteration, stats);
            }
        } catch (const ParseFailure&) {
            std::fprintf(stderr,
                         "warn: consolidation batch response unparseable, "
                         "rules pass through unmerged\n");
        }
    }
    return stats;
}

std::string unique_rule_id(const std::vector<Rule>& rules,
                           const std::string& text,
                           const std::string& source_url) {
    std::string base = rule_id_for(text, source_url);
    std::string id = base;
    int suffix = 2;
    while (find_rule(rules, id) != nullptr) {
        id = base + "-" + std::to_string(suffix++);
    }
    return id;
}

std::string bullet_list(const std::vector<std::string>& items) {
    std::string out;
    for (const std::string& item : items) {
        out += "- " + item + "\n";
    }
    if (!out.empty()) {
        out.pop_back();
    }
    return out;
}

}  // namespace dpr
