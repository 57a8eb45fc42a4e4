#include "dpr/evaluator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "dpr/errors.hpp"
#include "dpr/json_io.hpp"
#include "dpr/parallel.hpp"
#include "dpr/prompts.hpp"
#include "dpr/render.hpp"
#include "dpr/rng.hpp"

namespace dpr {

std::string to_string(PolicySource s) {
    switch (s) {
        case PolicySource::seed_only: return "seed_only";
        case PolicySource::dpr_index: return "dpr_index";
        case PolicySource::dpr_summary: return "dpr_summary";
        case PolicySource::external_text: return "external_text";
        case PolicySource::icl_examples: return "icl_examples";
    }
    return "?";
}

PolicySource policy_source_from_string(const std::string& s) {
    if (s == "seed_only") return PolicySource::seed_only;
    if (s == "dpr_index") return PolicySource::dpr_index;
    if (s == "dpr_summary") return PolicySource::dpr_summary;
    if (s == "external_text") return PolicySource::external_text;
    if (s == "icl_examples") return PolicySource::icl_examples;
    throw MissingAsset("unknown policy source: " + s);
}

namespace {

// Seeded sample of `count` distinct indices with the given label.
std::vector<std::size_t> sample_by_label(const std::vector<EvalExample>& pool,
                                         Label label, std::size_t count,
                                         SplitMix64& rng) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (pool[i].gold_label == label) {
            candidates.push_back(i);
        }
    }
    if (candidates.size() < count) {
        throw MissingAsset("icl pool holds only " +
                           std::to_string(candidates.size()) + " " +
                           to_string(label) + " examples, need " +
                           std::to_string(count));
    }
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j =
            i + rng.next_below(candidates.size() - i);
        std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(count);
    return candidates;
}

std::string icl_block(const std::vector<EvalExample>& pool,
                      std::uint64_t seed) {
    SplitMix64 rng(seed);
    const auto unsafe_idx = sample_by_label(pool, Label::unsafe, 3, rng);
    const auto safe_idx = sample_by_label(pool, Label::safe, 3, rng);
    std::string out = "Here are labeled examples for this domain:\n";
    int item = 1;
    for (std::size_t i : unsafe_idx) {
        out += "\nExample " + std::to_string(item++) + " (UNSAFE):\n" +
               pool[i].content + "\n";
    }
    for (std::size_t i : safe_idx) {
        out += "\nExample " + std::to_string(item++) + " (SAFE):\n" +
               pool[i].content + "\n";
    }
    return out;
}

bool token_at(const std::string& haystack, std::size_t pos,
              const char* token) {
    for (const char* t = token; *t; ++t, ++pos) {
        if (pos >= haystack.size() ||
            std::toupper(static_cast<unsigned char>(haystack[pos])) != *t) {
            return false;
        }
    }
    return true;
}

}  // namespace

std::string build_policy_context(const EvalConfig& config,
                                 const PolicyAssets& assets) {
    switch (config.policy_source) {
        case PolicySource::seed_only:
            if (!assets.spec) throw MissingAsset("seed_only needs a domain spec");
            return assets.spec->definition;
        case PolicySource::dpr_index:
            if (!assets.index) throw MissingAsset("dpr_index needs an index");
            return render_policy(*assets.index, assets.rules);
        case PolicySource::dpr_summary:
            if (!assets.index) throw MissingAsset("dpr_summary needs an index");
            return compress_index(*assets.index);
        case PolicySource::external_text:
            if (!assets.external_text) {
                throw MissingAsset("external_text needs a policy document");
            }
            return *assets.external_text;
        case PolicySource::icl_examples:
            if (assets.icl_pool.empty()) {
                throw MissingAsset("icl_examples needs a labeled example pool");
            }
            return icl_block(assets.icl_pool, assets.seed);
    }
    throw MissingAsset("unhandled policy source");
}

Judgment judge_example(const std::string& policy, const EvalExample& example,
                       double temperature, int sample_index,
                       ChatProvider& chat) {
    std::string content = example.content;
    for (const std::string& ref : example.attachments) {
        content += "\n[attachment] " + ref;
    }
    const std::string prompt = prompts::fill(
        prompts::kJudgeExample, {{"policy", policy}, {"content", content}});
    const std::string response =
        chat.chat(ChatRequest{prompt, temperature, sample_index});

    for (std::size_t pos = 0; pos < response.size(); ++pos) {
        if (token_at(response, pos, "UNSAFE")) {
            return Judgment{Label::unsafe, false};
        }
        if (token_at(response, pos, "SAFE")) {
            return Judgment{Label::safe, false};
        }
    }
    return Judgment{Label::unsafe, true};
}

Label majority_vote(const std::vector<Label>& labels, Label tie_break) {
    long unsafe_count = 0;
    for (Label l : labels) {
        if (l == Label::unsafe) ++unsafe_count;
    }
    const long safe_count = static_cast<long>(labels.size()) - unsafe_count;
    if (unsafe_count > safe_count) return Label::unsafe;
    if (safe_count > unsafe_count) return Label::safe;
    return tie_break;
}

double compute_f1(long tp, long fp, long fn) {
    if (tp + fp + fn == 0) {
        return 1.0;
    }
    if (tp == 0) {
        return 0.0;
    }
    return 2.0 * static_cast<double>(tp) /
           (2.0 * static_cast<double>(tp) + static_cast<double>(fp) +
            static_cast<double>(fn));
}

EvalReport evaluate_domain(const std::string& domain, const std::string& policy,
                           const std::vector<EvalExample>& dataset,
                           const EvalConfig& config, ChatProvider& chat,
                           int parallelism) {
    const int samples =
        config.mode == EvalMode::majority_vote ? config.vote_samples : 1;
    const double temperature =
        config.mode == EvalMode::majority_vote ? config.vote_temperature : 0.0;

    struct Outcome {
        PerExampleJudgment judgment;
        bool skipped = false;
    };
    const std::vector<Outcome> outcomes = parallel_map<Outcome>(
        dataset.size(), parallelism, [&](std::size_t i) {
            Outcome out;
            out.judgment.example_id = dataset[i].id;
            try {
                for (int s = 0; s < samples; ++s) {
                    const Judgment j =
                        judge_example(policy, dataset[i], temperature, s, chat);
                    out.judgment.samples.push_back(j.label);
                    out.judgment.flagged |= j.flagged;
                }
                out.judgment.final_label =
                    majority_vote(out.judgment.samples, config.tie_break);
            } catch (const Error& e) {
                std::fprintf(stderr, "warn: example %s skipped: %s\n",
                             dataset[i].id.c_str(), e.what());
                out.skipped = true;
            }
            return out;
        });

    EvalReport report;
    report.domain = domain;
    report.mode = config.mode;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].skipped) {
            report.skipped += 1;
            continue;
        }
        const bool gold_unsafe = dataset[i].gold_label == Label::unsafe;
        const bool pred_unsafe =
            outcomes[i].judgment.final_label == Label::unsafe;
        if (gold_unsafe && pred_unsafe) report.tp += 1;
        else if (!gold_unsafe && pred_unsafe) report.fp += 1;
        else if (gold_unsafe && !pred_unsafe) report.fn += 1;
        else report.tn += 1;
        report.per_example.push_back(outcomes[i].judgment);
    }
    report.f1 = compute_f1(report.tp, report.fp, report.fn);
    return report;
}

std::string report_to_csv(const EvalReport& report) {
    char f1[32];
    std::snprintf(f1, sizeof(f1), "%.4f", report.f1);
    std::string out = "domain,mode,tp,fp,fn,tn,f1,skipped\n";
    out += report.domain + "," + to_string(report.mode) + "," +
           std::to_string(report.tp) + "," + std::to_string(report.fp) + "," +
           std::to_string(report.fn) + "," + std::to_string(report.tn) + "," +
           f1 + "," + std::to_string(report.skipped) + "\n";
    return out;
}

}  // namespace dpr
