#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dpr/commands.hpp"
#include "dpr/errors.hpp"

namespace {

struct SharedFlags {
    std::string config;
    std::string transcript;
    std::string mode = "live";
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::string out;
    std::string cache_dir;
    int parallelism = 4;
};

void add_shared(CLI::App* cmd, SharedFlags& flags) {
    cmd->add_option("--config", flags.config, "configuration JSON file")
        ->required();
    cmd->add_option("--transcript", flags.transcript,
                    "transcript JSONL (record/replay modes)");
    cmd->add_option("--mode", flags.mode, "live|record|replay")
        ->check(CLI::IsMember({"live", "record", "replay"}));
    cmd->add_option("--seed", flags.seed, "override the configured RNG seed")
        ->each([&flags](const std::string&) { flags.seed_set = true; });
    cmd->add_option("--out", flags.out, "output directory")->required();
    cmd->add_option("--cache-dir", flags.cache_dir,
                    "response cache directory (live/record modes)");
    cmd->add_option("--parallelism", flags.parallelism,
                    "provider call concurrency bound");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deep policy research"};
    app.require_subcommand(1);

    SharedFlags research_flags;
    std::string research_spec;
    CLI::App* research =
        app.add_subcommand("research", "run the research loop over a domain spec");
    research->add_option("--spec", research_spec, "domain spec JSON file")
        ->required();
    add_shared(research, research_flags);

    SharedFlags eval_flags;
    std::string eval_policy = "seed_only";
    std::string eval_spec, eval_state, eval_policy_file, eval_icl_pool;
    std::string eval_dataset, eval_mode_override;
    CLI::App* eval =
        app.add_subcommand("eval", "judge a dataset with a policy in context");
    eval->add_option("--policy", eval_policy,
                     "seed_only|dpr_index|dpr_summary|external_text|icl_examples");
    eval->add_option("--spec", eval_spec, "domain spec JSON file");
    eval->add_option("--state", eval_state, "research state JSON file");
    eval->add_option("--policy-file", eval_policy_file,
                     "external policy text file");
    eval->add_option("--icl-pool", eval_icl_pool,
                     "labeled example pool JSONL for icl_examples");
    eval->add_option("--dataset", eval_dataset, "evaluation dataset JSONL")
        ->required();
    eval->add_option("--eval-mode", eval_mode_override,
                     "single_sample|majority_vote (overrides config)");
    add_shared(eval, eval_flags);

    std::string render_state, render_out;
    bool render_summary = false;
    CLI::App* render =
        app.add_subcommand("render", "render the policy from a state file");
    render->add_option("--state", render_state, "research state JSON file")
        ->required();
    render->add_option("--out-file", render_out,
                       "write to this file instead of stdout");
    render->add_flag("--summary", render_summary,
                     "render titles and summaries only");

    std::string stats_state, stats_csv;
    CLI::App* stats =
        app.add_subcommand("stats", "per-iteration metrics and source domains");
    stats->add_option("--state", stats_state, "research state JSON file")
        ->required();
    stats->add_option("--csv-dir", stats_csv, "also write CSVs here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (research->parsed()) {
            dpr::ResearchArgs args;
            args.spec_file = research_spec;
            args.config_file = research_flags.config;
            args.out_dir = research_flags.out;
            args.mode = dpr::transcript_mode_from_string(research_flags.mode);
            args.transcript = research_flags.transcript;
            args.cache_dir = research_flags.cache_dir;
            if (research_flags.seed_set) args.seed = research_flags.seed;
            args.parallelism = research_flags.parallelism;
            return dpr::cmd_research(args, std::cout, std::cerr);
        }
        if (eval->parsed()) {
            dpr::EvalArgs args;
            args.policy_source = eval_policy;
            args.spec_file = eval_spec;
            args.state_file = eval_state;
            args.policy_file = eval_policy_file;
            args.icl_pool_file = eval_icl_pool;
            args.dataset_file = eval_dataset;
            args.config_file = eval_flags.config;
            args.out_dir = eval_flags.out;
            if (!eval_mode_override.empty()) args.eval_mode = eval_mode_override;
            args.mode = dpr::transcript_mode_from_string(eval_flags.mode);
            args.transcript = eval_flags.transcript;
            args.cache_dir = eval_flags.cache_dir;
            if (eval_flags.seed_set) args.seed = eval_flags.seed;
            args.parallelism = eval_flags.parallelism;
            return dpr::cmd_eval(args, std::cout, std::cerr);
        }
        if (render->parsed()) {
            dpr::RenderArgs args;
            args.state_file = render_state;
            args.out_file = render_out;
            args.summary = render_summary;
            return dpr::cmd_render(args, std::cout, std::cerr);
        }
        if (stats->parsed()) {
            dpr::StatsArgs args;
            args.state_file = stats_state;
            args.csv_dir = stats_csv;
            return dpr::cmd_stats(args, std::cout, std::cerr);
        }
    } catch (const dpr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
