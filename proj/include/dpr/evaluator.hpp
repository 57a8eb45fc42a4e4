#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpr/providers.hpp"
#include "dpr/types.hpp"

namespace dpr {

enum class PolicySource {
    seed_only,
    dpr_index,
    dpr_summary,
    external_text,
    icl_examples,
};

std::string to_string(PolicySource s);
PolicySource policy_source_from_string(const std::string& s);

struct EvalConfig {
    EvalMode mode = EvalMode::single_sample;
    int vote_samples = 10;          // per-example samples in majority_vote
    double vote_temperature = 0.8;
    PolicySource policy_source = PolicySource::seed_only;
    Label tie_break = Label::unsafe;
};

// Everything a policy source might need; build_policy_context raises
// MissingAsset when the selected source's inputs are absent.
struct PolicyAssets {
    std::optional<DomainSpec> spec;
    std::optional<PolicyIndex> index;
    std::vector<Rule> rules;
    std::optional<std::string> external_text;
    std::vector<EvalExample> icl_pool;
    std::uint64_t seed = 0;
};

std::string build_policy_context(const EvalConfig& config,
                                 const PolicyAssets& assets);

struct Judgment {
    Label label = Label::safe;
    bool flagged = false;  // verdict token absent; judged unsafe by default
};

// One reader call: policy plus content into the judge template, then a
// left-to-right scan for the first SAFE/UNSAFE token (case-insensitive;
// UNSAFE wins where both match). No token at all counts as unsafe with the
// flag set, so refusals never silently pass content.
Judgment judge_example(const std::string& policy, const EvalExample& example,
                       double temperature, int sample_index,
                       ChatProvider& chat);

// Strict majority; exact ties resolve to tie_break.
Label majority_vote(const std::vector<Label>& labels, Label tie_break);

// F1 = 2tp / (2tp + fp + fn), with the vacuous conventions: 1.0 when
// tp+fp+fn = 0 and 0.0 when tp = 0 otherwise.
double compute_f1(long tp, long fp, long fn);

// Judges the dataset under the config (one temperature-0 sample in
// single_sample mode) and aggregates the confusion with unsafe as the
// positive class. Examples whose provider calls fail are skipped and
// tallied.
EvalReport evaluate_domain(const std::string& domain, const std::string& policy,
                           const std::vector<EvalExample>& dataset,
                           const EvalConfig& config, ChatProvider& chat,
                           int parallelism = 4);

std::string report_to_csv(const EvalReport& report);

}  // namespace dpr
