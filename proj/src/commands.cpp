#include "dpr/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpr/errors.hpp"
#include "dpr/json_io.hpp"
#include "dpr/json_repair.hpp"
#include "dpr/render.hpp"
#include "dpr/research_loop.hpp"
#include "dpr/state_io.hpp"

namespace dpr {

std::string to_string(TranscriptMode m) {
    switch (m) {
        case TranscriptMode::live: return "live";
        case TranscriptMode::record: return "record";
        case TranscriptMode::replay: return "replay";
    }
    return "?";
}

TranscriptMode transcript_mode_from_string(const std::string& s) {
    if (s == "live") return TranscriptMode::live;
    if (s == "record") return TranscriptMode::record;
    if (s == "replay") return TranscriptMode::replay;
    throw Error("unknown mode: " + s + " (expected live|record|replay)");
}

namespace {

ProviderEndpointConfig endpoint_from_json(const nlohmann::json& j,
                                          const std::string& which) {
    ProviderEndpointConfig c;
    c.kind = j.value("kind", "live");
    c.base_url = j.value("base_url", "");
    c.model = j.value("model", "");
    c.api_key_env = j.value("api_key_env", "");
    c.identity = j.value("identity", "");
    c.dimension = j.value("dimension", 24);
    c.seed = j.value("seed", std::uint64_t{1});
    if (c.kind != "live" && c.kind != "mock") {
        throw Error("providers." + which + ".kind must be live or mock");
    }
    return c;
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::string resolve_api_key(const ProviderEndpointConfig& endpoint) {
    if (endpoint.api_key_env.empty()) {
        return "";
    }
    const char* value = std::getenv(endpoint.api_key_env.c_str());
    if (value == nullptr || *value == '\0') {
        throw Error("environment variable " + endpoint.api_key_env +
                    " is not set (required by the configured provider)");
    }
    return value;
}

}  // namespace

ToolConfig load_tool_config(const std::filesystem::path& file) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(file), nullptr,
                                             false);
    if (j.is_discarded()) {
        throw Error("config file is not valid JSON: " + file.string());
    }
    ToolConfig config;
    if (j.contains("research")) {
        config.research = j["research"].get<ResearchConfig>();
    }
    if (j.contains("eval")) {
        const auto& e = j["eval"];
        if (e.contains("mode")) {
            config.eval.mode = eval_mode_from_string(e["mode"]);
        }
        config.eval.vote_samples = e.value("vote_samples", 10);
        config.eval.vote_temperature = e.value("vote_temperature", 0.8);
        if (e.contains("tie_break")) {
            config.eval.tie_break = label_from_string(e["tie_break"]);
        }
        if (config.eval.vote_samples < 1) {
            throw Error("eval.vote_samples must be positive");
        }
    }
    if (j.contains("providers")) {
        const auto& p = j["providers"];
        if (p.contains("chat")) config.chat = endpoint_from_json(p["chat"], "chat");
        if (p.contains("search"))
            config.search = endpoint_from_json(p["search"], "search");
        if (p.contains("embed"))
            config.embed = endpoint_from_json(p["embed"], "embed");
    }
    return config;
}

DomainSpec load_spec_file(const std::filesystem::path& file) {
    nlohmann::json j = nlohmann::json::parse(read_text_file(file), nullptr,
                                             false);
    if (j.is_discarded()) {
        throw Error("spec file is not valid JSON: " + file.string());
    }
    DomainSpec spec = j.get<DomainSpec>();
    validate_spec(spec);
    return spec;
}

ProviderWiring make_providers(const ToolConfig& config, TranscriptMode mode,
                              const std::filesystem::path& transcript_path,
                              const std::filesystem::path& cache_dir,
                              HttpTransport transport) {
    ProviderWiring wiring;
    wiring.chat_identity = config.chat.identity.empty()
                               ? (config.chat.model.empty() ? "chat"
                                                            : config.chat.model)
                               : config.chat.identity;
    wiring.search_identity =
        config.search.identity.empty()
            ? "search:" + config.search.base_url
            : config.search.identity;
    wiring.embed_identity =
        config.embed.identity.empty()
            ? (config.embed.kind == "mock"
                   ? HashEmbedder(config.embed.dimension, config.embed.seed)
                         .identity()
                   : config.embed.model)
            : config.embed.identity;

    if (mode == TranscriptMode::replay) {
        if (transcript_path.empty()) {
            throw Error("replay mode requires --transcript");
        }
        auto store = std::make_shared<TranscriptStore>(
            TranscriptStore::load(transcript_path));
        wiring.providers.chat = std::make_shared<ReplayChatProvider>(
            store, wiring.chat_identity);
        wiring.providers.search = std::make_shared<ReplaySearchProvider>(
            store, wiring.search_identity);
        wiring.providers.embed = std::make_shared<ReplayEmbeddingProvider>(
            store, wiring.embed_identity);
        return wiring;
    }

    if (!transport) {
        transport = default_transport();
    }

    LiveEndpoint chat_endpoint{config.chat.base_url, config.chat.model,
                               resolve_api_key(config.chat),
                               wiring.chat_identity};
    wiring.providers.chat =
        std::make_shared<LiveChatProvider>(chat_endpoint, transport);

    LiveEndpoint search_endpoint{config.search.base_url, "",
                                 resolve_api_key(config.search),
                                 wiring.search_identity};
    wiring.providers.search =
        std::make_shared<LiveSearchProvider>(search_endpoint, transport);

    if (config.embed.kind == "mock") {
        wiring.providers.embed = std::make_shared<HashEmbedder>(
            config.embed.dimension, config.embed.seed);
    } else {
        LiveEndpoint embed_endpoint{config.embed.base_url, config.embed.model,
                                    resolve_api_key(config.embed),
                                    wiring.embed_identity};
        wiring.providers.embed =
            std::make_shared<LiveEmbeddingProvider>(embed_endpoint, transport);
    }

    if (!cache_dir.empty()) {
        auto cache = std::make_shared<ResponseCache>(cache_dir);
        wiring.providers.chat = std::make_shared<CachingChatProvider>(
            wiring.providers.chat, cache);
        wiring.providers.search = std::make_shared<CachingSearchProvider>(
            wiring.providers.search, cache);
        wiring.providers.embed = std::make_shared<CachingEmbeddingProvider>(
            wiring.providers.embed, cache);
    }

    if (mode == TranscriptMode::record) {
        if (transcript_path.empty()) {
            throw Error("record mode requires --transcript");
        }
        wiring.transcript = std::make_shared<TranscriptStore>();
        wiring.providers.chat = std::make_shared<RecordingChatProvider>(
            wiring.providers.chat, wiring.transcript);
        wiring.providers.search = std::make_shared<RecordingSearchProvider>(
            wiring.providers.search, wiring.transcript);
        wiring.providers.embed = std::make_shared<RecordingEmbeddingProvider>(
            wiring.providers.embed, wiring.transcript);
    }
    return wiring;
}

namespace {

void write_manifest(const std::filesystem::path& out_dir,
                    const nlohmann::json& config_snapshot,
                    const DomainSpec& spec, const ProviderWiring& wiring,
                    TranscriptMode mode,
                    const std::filesystem::path& transcript_path,
                    const nlohmann::json& outputs,
                    const std::string& started_at) {
    nlohmann::json manifest{
        {"tool_version", kToolVersion},
        {"mode", to_string(mode)},
        {"config", config_snapshot},
        {"spec", spec},
        {"providers",
         {{"chat", wiring.chat_identity},
          {"search", wiring.search_identity},
          {"embed", wiring.embed_identity}}},
        {"outputs", outputs},
        {"started_at", started_at},
        {"finished_at", iso8601_now()},
    };
    if (!transcript_path.empty()) {
        manifest["transcript"] = transcript_path.string();
    }
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace

int cmd_research(const ResearchArgs& args, std::ostream& out,
                 std::ostream& err) {
    const std::string started_at = iso8601_now();
    try {
        const DomainSpec spec = load_spec_file(args.spec_file);
        ToolConfig config = load_tool_config(args.config_file);
        if (args.seed.has_value()) {
            config.research.rng_seed = *args.seed;
        }

        ProviderWiring wiring = make_providers(
            config, args.mode, args.transcript, args.cache_dir, args.transport);

        const auto state_file = args.out_dir / "state.json";
        const auto evidence_file = args.out_dir / "evidence.jsonl";
        std::optional<ResearchState> resume;
        if (std::filesystem::exists(state_file)) {
            resume = load_state(state_file);
            err << "resuming from " << state_file.string() << " at iteration "
                << resume->iteration << "\n";
        }

        RunOptions options;
        options.parallelism = args.parallelism;
        options.on_iteration = [&](const ResearchState& s) {
            save_state(s, state_file);
            save_evidence_jsonl(s.evidence_log, evidence_file);
        };

        IterationRunStats stats;
        const ResearchState state =
            run_research(spec, config.research, wiring.providers, options,
                         std::move(resume), &stats);

        save_state(state, state_file);
        save_evidence_jsonl(state.evidence_log, evidence_file);
        write_text_file(args.out_dir / "policy.md",
                        render_policy(state.index, state.rules));
        write_text_file(args.out_dir / "policy_summary.md",
                        compress_index(state.index));
        write_text_file(args.out_dir / "metrics.csv",
                        metrics_to_csv(state.metrics));
        if (wiring.transcript) {
            wiring.transcript->save(args.transcript);
        }

        nlohmann::json outputs{
            {"state", "state.json"},
            {"evidence", "evidence.jsonl"},
            {"policy", "policy.md"},
            {"policy_summary", "policy_summary.md"},
            {"metrics", "metrics.csv"},
        };
        write_manifest(args.out_dir, nlohmann::json(config.research), spec,
                       wiring, args.mode, args.transcript, outputs, started_at);

        out << "research complete: " << state.iteration << " iterations, "
            << active_rules(state.rules).size() << " active rules, "
            << state.index.sections.size() << " sections\n";

        if (stats.extraction_calls > 0 &&
            2 * stats.extraction_parse_failures > stats.extraction_calls) {
            err << "error: " << stats.extraction_parse_failures << " of "
                << stats.extraction_calls
                << " extraction calls were unparseable\n";
            return 2;
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

std::vector<EvalExample> load_dataset(const std::filesystem::path& file) {
    std::istringstream in(read_text_file(file));
    std::vector<EvalExample> out;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim_copy(line).empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw Error("dataset row " + std::to_string(row) +
                        ": not valid JSON");
        }
        try {
            EvalExample example = j.get<EvalExample>();
            if (example.content.empty()) {
                throw Error("content is empty");
            }
            out.push_back(std::move(example));
        } catch (const std::exception& e) {
            throw Error("dataset row " + std::to_string(row) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
    try {
        ToolConfig config = load_tool_config(args.config_file);
        EvalConfig eval = config.eval;
        eval.policy_source = policy_source_from_string(args.policy_source);
        if (args.eval_mode.has_value()) {
            eval.mode = eval_mode_from_string(*args.eval_mode);
        }

        PolicyAssets assets;
        assets.seed = args.seed.value_or(config.research.rng_seed);
        std::string domain = "unknown";
        if (!args.spec_file.empty()) {
            assets.spec = load_spec_file(args.spec_file);
            domain = assets.spec->name;
        }
        if (!args.state_file.empty()) {
            const ResearchState state = load_state(args.state_file);
            assets.index = state.index;
            assets.rules = state.rules;
            if (!assets.spec) {
                assets.spec = state.spec;
                domain = state.spec.name;
            }
        }
        if (!args.policy_file.empty()) {
            assets.external_text = read_text_file(args.policy_file);
        }
        if (!args.icl_pool_file.empty()) {
            assets.icl_pool = load_dataset(args.icl_pool_file);
        }

        const std::string policy = build_policy_context(eval, assets);
        const std::vector<EvalExample> dataset = load_dataset(args.dataset_file);
        if (dataset.empty()) {
            throw Error("dataset is empty: " + args.dataset_file.string());
        }

        ProviderWiring wiring = make_providers(
            config, args.mode, args.transcript, args.cache_dir, args.transport);
        const EvalReport report =
            evaluate_domain(domain, policy, dataset, eval,
                            *wiring.providers.chat, args.parallelism);

        if (!args.out_dir.empty()) {
            const std::string suffix = to_string(report.mode);
            write_text_file(args.out_dir / ("report_" + suffix + ".json"),
                            nlohmann::json(report).dump(2) + "\n");
            write_text_file(args.out_dir / ("report_" + suffix + ".csv"),
                            report_to_csv(report));
        }
        if (wiring.transcript) {
            wiring.transcript->save(args.transcript);
        }

        char f1[32];
        std::snprintf(f1, sizeof(f1), "%.4f", report.f1);
        out << "f1=" << f1 << "\n";
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_render(const RenderArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const ResearchState state = load_state(args.state_file);
        const std::string text = args.summary
                                     ? compress_index(state.index)
                                     : render_policy(state.index, state.rules);
        if (args.out_file.empty()) {
            out << text;
        } else {
            write_text_file(args.out_file, text);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err) {
    try {
        const ResearchState state = load_state(args.state_file);

        out << "iteration queries evidence candidates filtered active "
               "cumulative sections\n";
        for (const IterationMetrics& m : state.metrics) {
            char row[160];
            std::snprintf(row, sizeof(row),
                          "%9d %7d %8d %10d %8d %6d %10d %8d\n", m.iteration,
                          m.queries_issued, m.evidence_count,
                          m.candidates_extracted, m.rules_after_filter,
                          m.active_rule_count, m.cumulative_discovered_count,
                          m.section_count);
            out << row;
        }

        const auto histogram = source_domain_histogram(state);
        out << "\nsource domains (" << histogram.size() << "):\n";
        for (const auto& [domain, count] : histogram) {
            out << "  " << domain << " " << count << "\n";
        }

        if (!args.csv_dir.empty()) {
            write_text_file(args.csv_dir / "metrics.csv",
                            metrics_to_csv(state.metrics));
            std::string csv = "domain,sources\n";
            for (const auto& [domain, count] : histogram) {
                csv += domain + "," + std::to_string(count) + "\n";
            }
            write_text_file(args.csv_dir / "source_domains.csv", csv);
        }
        return 0;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace dpr
