#include "dpr/indexer.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "dpr/errors.hpp"
#include "dpr/json_repair.hpp"
#include "dpr/kmeans.hpp"
#include "dpr/prompts.hpp"
#include "dpr/rng.hpp"
#include "dpr/rule_pipeline.hpp"

namespace dpr {

namespace {

const std::unordered_set<std::string>& stopwords() {
    static const std::unordered_set<std::string> words{
        "a",    "an",   "and",  "are",  "as",   "at",   "be",   "by",
        "can",  "for",  "from", "in",   "is",   "it",   "may",  "must",
        "not",  "of",   "on",   "or",   "such", "that", "the",  "their",
        "this", "to",   "with", "which"};
    return words;
}

std::string first_nonempty_line(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        line = trim_copy(line);
        if (!line.empty()) {
            return line;
        }
    }
    return "";
}

std::string first_sentence(const std::string& text) {
    const std::size_t dot = text.find('.');
    if (dot == std::string::npos) {
        return trim_copy(text);
    }
    return trim_copy(text.substr(0, dot + 1));
}

}  // namespace

std::string keyphrase_fallback(const std::string& rule_text) {
    std::vector<std::string> words;
    std::string cur;
    for (char c : rule_text + " ") {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
            c == '\'') {
            cur.push_back(c);
        } else if (!cur.empty()) {
            std::string lower = cur;
            std::transform(lower.begin(), lower.end(), lower.begin(),
                           [](unsigned char ch) { return std::tolower(ch); });
            if (!stopwords().count(lower)) {
                words.push_back(cur);
            }
            cur.clear();
            if (words.size() == 5) break;
        }
    }
    if (words.empty()) {
        return trim_copy(rule_text).substr(0, 40);
    }
    std::string out;
    for (const std::string& w : words) {
        if (!out.empty()) out.push_back(' ');
        out += w;
    }
    return out;
}

std::string extract_keyphrase(const Rule& rule, const DomainSpec& spec,
                              ChatProvider& chat) {
    const std::string prompt = prompts::fill(
        prompts::kExtractKeyphrase,
        {{"research_goal", spec.definition}, {"rule_text", rule.text}});
    const std::string phrase =
        first_nonempty_line(chat.chat(ChatRequest{prompt, 0.0, 0}));
    if (!phrase.empty()) {
        return phrase;
    }
    const std::string fallback = keyphrase_fallback(rule.text);
    std::fprintf(stderr, "warn: empty keyphrase for rule %s, using '%s'\n",
                 rule.id.c_str(), fallback.c_str());
    return fallback;
}

std::string title_section(const std::vector<std::string>& member_texts,
                          const std::vector<std::string>& keyphrases,
                          const DomainSpec& spec, ChatProvider& chat) {
    const std::string prompt = prompts::fill(
        prompts::kTitleSection, {{"research_goal", spec.definition},
                                 {"rule_text_list", bullet_list(member_texts)},
                                 {"keyphrases_list", bullet_list(keyphrases)}});
    const std::string title =
        first_nonempty_line(chat.chat(ChatRequest{prompt, 0.0, 0}));
    if (!title.empty()) {
        return title;
    }
    // Most frequent keyphrase; first occurrence wins ties.
    std::map<std::string, int> counts;
    for (const std::string& k : keyphrases) {
        ++counts[k];
    }
    std::string best;
    int best_count = 0;
    for (const std::string& k : keyphrases) {
        if (counts[k] > best_count) {
            best = k;
            best_count = counts[k];
        }
    }
    std::fprintf(stderr, "warn: empty section title, using keyphrase '%s'\n",
                 best.c_str());
    return best.empty() ? keyphrase_fallback(member_texts.front()) : best;
}

std::string summarize_section(const std::vector<std::string>& member_texts,
                              const DomainSpec& spec, ChatProvider& chat) {
    const std::string prompt = prompts::fill(
        prompts::kSummarizeSection,
        {{"research_goal", spec.definition},
         {"rule_text_list", bullet_list(member_texts)}});
    const std::string summary = trim_copy(chat.chat(ChatRequest{prompt, 0.0, 0}));
    if (!summary.empty()) {
        return summary;
    }
    std::string fallback;
    for (const std::string& text : member_texts) {
        if (!fallback.empty()) fallback.push_back(' ');
        fallback += first_sentence(text);
    }
    std::fprintf(stderr, "warn: empty section summary, using first sentences\n");
    return fallback;
}

namespace {

struct TitleDirective {
    std::vector<std::string> original_titles;
    std::string new_title;
};

std::vector<TitleDirective> parse_title_directives(const std::string& response) {
    std::vector<TitleDirective> out;
    for (const auto& item : parse_json_array(response)) {
        if (!item.is_object() || !item.contains("original_titles") ||
            !item.contains("new_title") || !item["original_titles"].is_array() ||
            !item["new_title"].is_string()) {
            std::fprintf(stderr, "warn: skipping malformed title directive\n");
            continue;
        }
        TitleDirective d;
        d.new_title = trim_copy(item["new_title"].get<std::string>());
        for (const auto& t : item["original_titles"]) {
            if (t.is_string()) d.original_titles.push_back(t.get<std::string>());
        }
        if (!d.original_titles.empty() && !d.new_title.empty()) {
            out.push_back(std::move(d));
        }
    }
    return out;
}

void sort_section_rules(Section& section, const std::vector<Rule>& rules) {
    std::unordered_map<std::string, const Rule*> by_id;
    for (const Rule& r : rules) by_id.emplace(r.id, &r);
    std::stable_sort(section.rule_ids.begin(), section.rule_ids.end(),
                     [&](const std::string& a, const std::string& b) {
                         const Rule* ra = by_id.at(a);
                         const Rule* rb = by_id.at(b);
                         if (ra->iteration_discovered !=
                             rb->iteration_discovered) {
                             return ra->iteration_discovered <
                                    rb->iteration_discovered;
                         }
                         return ra->id < rb->id;
                     });
    // Keyphrases track the rule order.
    section.keyphrases.clear();
    for (const std::string& id : section.rule_ids) {
        const Rule* r = by_id.at(id);
        section.keyphrases.push_back(r->keyphrase.value_or(""));
    }
}

}  // namespace

void merge_section_titles(std::vector<Section>& sections,
                          const std::vector<Rule>& rules,
                          const DomainSpec& spec, ChatProvider& chat) {
    if (sections.size() < 2) {
        return;
    }
    std::vector<std::string> titles;
    for (const Section& s : sections) {
        titles.push_back(s.title);
    }
    const std::string prompt = prompts::fill(
        prompts::kMergeSectionTitles, {{"research_goal", spec.definition},
                                       {"cluster_titles", bullet_list(titles)}});
    std::vector<TitleDirective> directives;
    try {
        directives = parse_title_directives(chat.chat(ChatRequest{prompt, 0.0, 0}));
    } catch (const ParseFailure&) {
        std::fprintf(stderr,
                     "warn: title merge response unparseable, keeping sections\n");
        return;
    }

    std::unordered_map<std::string, const Rule*> by_id;
    for (const Rule& r : rules) by_id.emplace(r.id, &r);

    for (const TitleDirective& d : directives) {
        if (normalize_rule_text(d.new_title) ==
            normalize_rule_text(spec.definition)) {
            std::fprintf(stderr,
                         "warn: rejecting merged title equal to the domain "
                         "description\n");
            continue;
        }
        std::vector<std::size_t> member_sections;
        bool ok = true;
        for (const std::string& original : d.original_titles) {
            bool found = false;
            for (std::size_t i = 0; i < sections.size(); ++i) {
                if (sections[i].title == original &&
                    std::find(member_sections.begin(), member_sections.end(),
                              i) == member_sections.end()) {
                    member_sections.push_back(i);
                    found = true;
                    break;
                }
            }
            if (!found) {
                std::fprintf(stderr,
                             "warn: title directive names unknown title "
                             "'%.60s', ignored\n",
                             original.c_str());
                ok = false;
                break;
            }
        }
        if (!ok || member_sections.empty()) {
            continue;
        }

        Section& target = sections[member_sections.front()];
        target.title = d.new_title;
        for (std::size_t i = 1; i < member_sections.size(); ++i) {
            Section& absorbed = sections[member_sections[i]];
            target.rule_ids.insert(target.rule_ids.end(),
                                   absorbed.rule_ids.begin(),
                                   absorbed.rule_ids.end());
            absorbed.rule_ids.clear();
        }
        sort_section_rules(target, rules);
        if (member_sections.size() > 1) {
            std::vector<std::string> member_texts;
            for (const std::string& id : target.rule_ids) {
                member_texts.push_back(by_id.at(id)->text);
            }
            target.summary = summarize_section(member_texts, spec, chat);
        }
    }
    sections.erase(std::remove_if(sections.begin(), sections.end(),
                                  [](const Section& s) {
                                      return s.rule_ids.empty();
                                  }),
                   sections.end());
}

PolicyIndex build_index(std::vector<Rule>& rules, const DomainSpec& spec,
                        const ResearchConfig& config, int iteration,
                        Providers& providers) {
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (rules[i].status == RuleStatus::active) {
            active.push_back(i);
        }
    }
    PolicyIndex index;
    index.spec = spec;
    index.iteration = iteration;
    if (active.empty()) {
        return index;
    }

    for (std::size_t i : active) {
        if (!rules[i].keyphrase.has_value() || rules[i].keyphrase->empty()) {
            rules[i].keyphrase =
                extract_keyphrase(rules[i], spec, *providers.chat);
        }
    }

    std::vector<std::string> keyphrases;
    keyphrases.reserve(active.size());
    for (std::size_t i : active) {
        keyphrases.push_back(*rules[i].keyphrase);
    }
    const std::vector<EmbeddingVector> vectors =
        providers.embed->embed(keyphrases);
    if (vectors.size() != keyphrases.size()) {
        throw DimensionMismatch("embedding provider returned " +
                                std::to_string(vectors.size()) +
                                " vectors for " +
                                std::to_string(keyphrases.size()) + " texts");
    }

    // The clustering seed is iteration-independent: an iteration that
    // contributes no new rules must rebuild the identical index.
    const ClusterAssignment clusters = kmeans(
        vectors, config.n, derive_seed(config.rng_seed, 0x6b6d65616e73ULL),
        config.kmeans_restarts);

    const int cluster_count =
        clusters.n_eff + (clusters.has_overflow ? 1 : 0);
    std::vector<Section> sections;
    for (int c = 0; c < cluster_count; ++c) {
        Section section;
        std::vector<std::string> member_texts;
        std::vector<std::string> member_keyphrases;
        for (std::size_t p = 0; p < active.size(); ++p) {
            if (clusters.assignment[p] != c) continue;
            const Rule& rule = rules[active[p]];
            section.rule_ids.push_back(rule.id);
            member_texts.push_back(rule.text);
            member_keyphrases.push_back(*rule.keyphrase);
        }
        if (section.rule_ids.empty()) {
            continue;
        }
        section.keyphrases = member_keyphrases;
        section.title =
            title_section(member_texts, member_keyphrases, spec, *providers.chat);
        section.summary = summarize_section(member_texts, spec, *providers.chat);
        sort_section_rules(section, rules);
        sections.push_back(std::move(section));
    }

    merge_section_titles(sections, rules, spec, *providers.chat);

    std::stable_sort(sections.begin(), sections.end(),
                     [](const Section& a, const Section& b) {
                         if (a.rule_ids.size() != b.rule_ids.size()) {
                             return a.rule_ids.size() > b.rule_ids.size();
                         }
                         return a.title < b.title;
                     });
    index.sections = std::move(sections);
    return index;
}

}  // namespace dpr
