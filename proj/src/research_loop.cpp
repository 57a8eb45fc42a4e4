#include "dpr/research_loop.hpp"

#include <cstdio>
#include <unordered_set>

#include "dpr/errors.hpp"
#include "dpr/indexer.hpp"
#include "dpr/json_repair.hpp"
#include "dpr/parallel.hpp"
#include "dpr/prompts.hpp"
#include "dpr/rule_pipeline.hpp"

namespace dpr {

std::string summarize_datastore(const PolicyIndex& index) {
    if (index.sections.empty()) {
        return index.spec.definition;
    }
    std::size_t active = 0;
    for (const Section& s : index.sections) {
        active += s.rule_ids.size();
    }
    std::string out = "Sections (" + std::to_string(active) + " active rules):";
    for (const Section& s : index.sections) {
        out += "\n- " + s.title + ": " + s.summary;
    }
    return out;
}

QueryBatch generate_queries(const DomainSpec& spec, const PolicyIndex& index,
                            int iteration, const ResearchConfig& config,
                            ChatProvider& chat) {
    const std::string prompt = prompts::fill(
        prompts::kGenerateQueries,
        {{"research_goal", spec.definition},
         {"current_datastore_summary", summarize_datastore(index)}});
    const std::string response = chat.chat(ChatRequest{prompt, 0.0, 0});

    QueryBatch batch;
    batch.iteration = iteration;
    std::unordered_set<std::string> seen;
    for (const std::string& q : string_elements(parse_json_array(response))) {
        if (static_cast<int>(batch.queries.size()) >=
            config.queries_per_iteration_cap) {
            break;
        }
        if (seen.insert(q).second) {
            batch.queries.push_back(q);
        }
    }
    if (batch.queries.empty()) {
        throw ParseFailure("query generation produced no usable queries");
    }
    return batch;
}

std::vector<EvidenceSource> gather_evidence(
    const QueryBatch& batch, const ResearchConfig& config,
    const std::vector<EvidenceSource>& evidence_log, SearchProvider& search,
    int parallelism) {
    struct QueryResult {
        std::vector<EvidenceSource> sources;
        bool failed = false;
        std::string error;
    };
    const std::vector<QueryResult> results =
        parallel_map<QueryResult>(batch.queries.size(), parallelism,
                                  [&](std::size_t i) {
                                      QueryResult r;
                                      try {
                                          r.sources = search.search(SearchRequest{
                                              batch.queries[i], config.m});
                                      } catch (const Error& e) {
                                          r.failed = true;
                                          r.error = e.what();
                                      }
                                      return r;
                                  });

    std::size_t failed = 0;
    std::unordered_set<std::string> seen;
    for (const EvidenceSource& e : evidence_log) {
        seen.insert(strip_fragment(e.url));
    }
    std::vector<EvidenceSource> out;
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (results[i].failed) {
            ++failed;
            std::fprintf(stderr, "warn: query '%s' failed: %s\n",
                         batch.queries[i].c_str(), results[i].error.c_str());
            continue;
        }
        for (EvidenceSource source : results[i].sources) {
            if (!seen.insert(strip_fragment(source.url)).second) {
                continue;
            }
            source.retrieved_at_iteration = batch.iteration;
            out.push_back(std::move(source));
        }
    }
    if (failed == batch.queries.size() && !batch.queries.empty()) {
        throw AllQueriesFailed("all " + std::to_string(failed) +
                               " queries failed this iteration");
    }
    return out;
}

void run_iteration(ResearchState& state, Providers& providers,
                   const RunOptions& options, IterationRunStats* stats) {
    const int iteration = state.iteration + 1;

    // Step 1: queries and evidence.
    const QueryBatch batch = generate_queries(state.spec, state.index,
                                              iteration, state.config,
                                              *providers.chat);
    std::vector<EvidenceSource> evidence =
        gather_evidence(batch, state.config, state.evidence_log,
                        *providers.search, options.parallelism);
    for (const EvidenceSource& e : evidence) {
        state.evidence_log.push_back(e);
    }

    // Step 2: extract, score, filter, consolidate.
    std::vector<EvidenceChunk> chunks;
    for (const EvidenceSource& source : evidence) {
        try {
            for (EvidenceChunk& chunk : chunk_evidence(source, state.config)) {
                chunks.push_back(std::move(chunk));
            }
        } catch (const EmptyEvidence& e) {
            std::fprintf(stderr, "warn: %s\n", e.what());
        }
    }

    struct ExtractResult {
        std::vector<CandidateRule> candidates;
        bool parse_failed = false;
    };
    const std::vector<ExtractResult> extracted =
        parallel_map<ExtractResult>(
            chunks.size(), options.parallelism, [&](std::size_t i) {
                ExtractResult r;
                try {
                    r.candidates =
                        extract_rules(chunks[i], state.spec, *providers.chat);
                } catch (const ParseFailure& e) {
                    r.parse_failed = true;
                    std::fprintf(stderr, "warn: chunk skipped: %s\n", e.what());
                }
                return r;
            });

    std::vector<CandidateRule> candidates;
    for (const ExtractResult& r : extracted) {
        if (stats) {
            stats->extraction_calls += 1;
            stats->extraction_parse_failures += r.parse_failed ? 1 : 0;
        }
        candidates.insert(candidates.end(), r.candidates.begin(),
                          r.candidates.end());
    }

    const std::vector<int> scores = parallel_map<int>(
        candidates.size(), options.parallelism, [&](std::size_t i) {
            return score_relevance(candidates[i], state.spec, *providers.chat);
        });
    std::vector<ScoredCandidate> scored;
    scored.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        scored.push_back(ScoredCandidate{candidates[i], scores[i]});
    }

    const std::vector<ScoredCandidate> accepted =
        filter_rules(scored, state.config.relevance_threshold, state.rules);
    for (const ScoredCandidate& sc : accepted) {
        Rule rule;
        rule.text = sc.candidate.text;
        rule.supporting_text = sc.candidate.supporting_text;
        rule.source_url = sc.candidate.source_url;
        rule.relevance_score = sc.score;
        rule.iteration_discovered = iteration;
        rule.id = unique_rule_id(state.rules, rule.text, rule.source_url);
        state.rules.push_back(std::move(rule));
    }

    consolidate(state.rules, state.spec, *providers.chat, iteration);

    // Step 3: rebuild the index over the full active rule set.
    state.index = build_index(state.rules, state.spec, state.config, iteration,
                              providers);

    IterationMetrics metrics;
    metrics.iteration = iteration;
    metrics.queries_issued = static_cast<int>(batch.queries.size());
    metrics.evidence_count = static_cast<int>(evidence.size());
    metrics.candidates_extracted = static_cast<int>(candidates.size());
    metrics.rules_after_filter = static_cast<int>(accepted.size());
    metrics.active_rule_count =
        static_cast<int>(active_rules(state.rules).size());
    metrics.cumulative_discovered_count =
        (state.metrics.empty() ? 0
                               : state.metrics.back().cumulative_discovered_count) +
        metrics.rules_after_filter;
    metrics.section_count = static_cast<int>(state.index.sections.size());
    state.metrics.push_back(metrics);
    state.iteration = iteration;
}

ResearchState run_research(const DomainSpec& spec, const ResearchConfig& config,
                           Providers& providers, const RunOptions& options,
                           std::optional<ResearchState> resume,
                           IterationRunStats* stats) {
    validate_spec(spec);
    ResearchState state;
    if (resume.has_value()) {
        state = std::move(*resume);
        if (!(state.spec == spec)) {
            throw CorruptState("resume: state file was built from a different "
                               "domain spec");
        }
        state.config = config;
    } else {
        state.spec = spec;
        state.config = config;
        state.iteration = 0;
        state.index = PolicyIndex{spec, {}, 0};
    }

    while (state.iteration < state.config.k) {
        run_iteration(state, providers, options, stats);
        if (options.on_iteration) {
            options.on_iteration(state);
        }
    }
    return state;
}

std::map<std::string, int> source_domain_histogram(const ResearchState& state) {
    std::unordered_set<std::string> surviving_urls;
    for (const Rule& r : state.rules) {
        if (r.merged_from.empty()) {
            surviving_urls.insert(r.source_url);
        }
    }
    std::map<std::string, int> histogram;
    for (const EvidenceSource& e : state.evidence_log) {
        if (surviving_urls.count(e.url)) {
            histogram[registrable_domain(e.host)] += 1;
        }
    }
    return histogram;
}

}  // namespace dpr
