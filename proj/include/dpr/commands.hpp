#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>

#include "dpr/evaluator.hpp"
#include "dpr/live_providers.hpp"
#include "dpr/providers.hpp"
#include "dpr/transcript.hpp"
#include "dpr/types.hpp"

namespace dpr {

inline constexpr const char* kToolVersion = "0.1.0";

enum class TranscriptMode { live, record, replay };

std::string to_string(TranscriptMode m);
TranscriptMode transcript_mode_from_string(const std::string& s);

struct ProviderEndpointConfig {
    std::string kind = "live";  // "live", or "mock" for the embedder
    std::string base_url;
    std::string model;
    std::string api_key_env;
    std::string identity;       // digest key; defaults from model/base_url
    int dimension = 24;         // mock embedder
    std::uint64_t seed = 1;     // mock embedder
};

struct ToolConfig {
    ResearchConfig research;
    EvalConfig eval;
    ProviderEndpointConfig chat;
    ProviderEndpointConfig search;
    ProviderEndpointConfig embed;
};

ToolConfig load_tool_config(const std::filesystem::path& file);
DomainSpec load_spec_file(const std::filesystem::path& file);

struct ProviderWiring {
    Providers providers;
    std::shared_ptr<TranscriptStore> transcript;  // record mode writes here
    std::string chat_identity;
    std::string search_identity;
    std::string embed_identity;
};

// Builds the provider stack for the requested mode. Replay mode reads the
// transcript and constructs no live provider at all; record mode wraps the
// live stack with recorders. The transport override exists for tests.
ProviderWiring make_providers(const ToolConfig& config, TranscriptMode mode,
                              const std::filesystem::path& transcript_path,
                              const std::filesystem::path& cache_dir,
                              HttpTransport transport = nullptr);

struct ResearchArgs {
    std::filesystem::path spec_file;
    std::filesystem::path config_file;
    std::filesystem::path out_dir;
    TranscriptMode mode = TranscriptMode::live;
    std::filesystem::path transcript;
    std::filesystem::path cache_dir;
    std::optional<std::uint64_t> seed;
    int parallelism = 4;
    HttpTransport transport;  // tests only
};

struct EvalArgs {
    std::string policy_source = "seed_only";
    std::filesystem::path spec_file;
    std::filesystem::path state_file;     // dpr_index / dpr_summary
    std::filesystem::path policy_file;    // external_text
    std::filesystem::path icl_pool_file;  // icl_examples
    std::filesystem::path dataset_file;
    std::filesystem::path config_file;
    std::filesystem::path out_dir;
    std::optional<std::string> eval_mode;  // overrides config
    TranscriptMode mode = TranscriptMode::live;
    std::filesystem::path transcript;
    std::filesystem::path cache_dir;
    std::optional<std::uint64_t> seed;
    int parallelism = 4;
    HttpTransport transport;
};

struct RenderArgs {
    std::filesystem::path state_file;
    std::filesystem::path out_file;  // stdout when empty
    bool summary = false;
};

struct StatsArgs {
    std::filesystem::path state_file;
    std::filesystem::path csv_dir;  // optional CSV output
};

// Exit codes: 0 success; 1 configuration/provider/data errors; research
// additionally exits 2 when more than half of the extraction calls in a
// run were unparseable.
int cmd_research(const ResearchArgs& args, std::ostream& out,
                 std::ostream& err);
int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err);
int cmd_render(const RenderArgs& args, std::ostream& out, std::ostream& err);
int cmd_stats(const StatsArgs& args, std::ostream& out, std::ostream& err);

}  // namespace dpr
