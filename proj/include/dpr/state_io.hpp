#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dpr/types.hpp"

namespace dpr {

// State persists as one pretty-printed JSON document; the evidence log is
// additionally written as JSONL, one EvidenceSource per line, for
// inspection with line-oriented tools.

std::string state_to_json_text(const ResearchState& state);
ResearchState state_from_json_text(const std::string& text);

void save_state(const ResearchState& state, const std::filesystem::path& file);
ResearchState load_state(const std::filesystem::path& file);

void save_evidence_jsonl(const std::vector<EvidenceSource>& evidence,
                         const std::filesystem::path& file);
std::vector<EvidenceSource> load_evidence_jsonl(
    const std::filesystem::path& file);

std::string metrics_to_csv(const std::vector<IterationMetrics>& metrics);

std::string read_text_file(const std::filesystem::path& file);
void write_text_file(const std::filesystem::path& file,
                     const std::string& content);

}  // namespace dpr
