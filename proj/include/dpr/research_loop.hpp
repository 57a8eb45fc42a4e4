#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dpr/providers.hpp"
#include "dpr/types.hpp"

namespace dpr {

struct QueryBatch {
    int iteration = 0;
    std::vector<std::string> queries;
};

struct RunOptions {
    int parallelism = 4;
    // Invoked after every completed iteration, before the next one starts;
    // the research command persists state here.
    std::function<void(const ResearchState&)> on_iteration;
};

// Extraction-call accounting for the parse-failure storm exit code.
struct IterationRunStats {
    int extraction_calls = 0;
    int extraction_parse_failures = 0;
};

// Compact coverage signal handed back to query generation: the bare
// definition for the seed-only index, otherwise titles, summaries and the
// active rule count.
std::string summarize_datastore(const PolicyIndex& index);

// Fills the query-generation template, parses the response as a JSON list
// of strings, strips blanks and exact duplicates, and truncates to the
// per-iteration cap. Throws ParseFailure when no usable query survives.
QueryBatch generate_queries(const DomainSpec& spec, const PolicyIndex& index,
                            int iteration, const ResearchConfig& config,
                            ChatProvider& chat);

// Issues one search per query and concatenates results, dropping URLs
// (fragment-stripped) already present in the run's evidence log or earlier
// in the batch. Individual query failures are logged and skipped; if every
// query fails, AllQueriesFailed.
std::vector<EvidenceSource> gather_evidence(
    const QueryBatch& batch, const ResearchConfig& config,
    const std::vector<EvidenceSource>& evidence_log, SearchProvider& search,
    int parallelism);

// One full loop turn: queries, evidence, extract -> score -> filter ->
// consolidate, rebuild the index, stamp metrics.
void run_iteration(ResearchState& state, Providers& providers,
                   const RunOptions& options,
                   IterationRunStats* stats = nullptr);

// Runs the loop from the seed (or from a resumed state, continuing at the
// last completed iteration) through config.k iterations.
ResearchState run_research(const DomainSpec& spec, const ResearchConfig& config,
                           Providers& providers, const RunOptions& options = {},
                           std::optional<ResearchState> resume = std::nullopt,
                           IterationRunStats* stats = nullptr);

// Registrable source domain -> number of evidence sources that yielded at
// least one rule surviving the relevance filter.
std::map<std::string, int> source_domain_histogram(const ResearchState& state);

}  // namespace dpr
