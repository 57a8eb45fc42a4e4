#pragma once

#include <nlohmann/json.hpp>

#include "dpr/types.hpp"

// ADL serializers for the domain types. Dumps are key-sorted by
// nlohmann::json, so serialized artifacts are byte-stable. Optional fields
// are omitted when unset and treated as unset when absent.

namespace dpr {

std::string to_string(ChunkMode m);
std::string to_string(RuleStatus s);
std::string to_string(Label l);
std::string to_string(EvalMode m);

ChunkMode chunk_mode_from_string(const std::string& s);
RuleStatus rule_status_from_string(const std::string& s);
Label label_from_string(const std::string& s);
EvalMode eval_mode_from_string(const std::string& s);

void to_json(nlohmann::json& j, const DomainSpec& v);
void from_json(const nlohmann::json& j, DomainSpec& v);

void to_json(nlohmann::json& j, const ResearchConfig& v);
void from_json(const nlohmann::json& j, ResearchConfig& v);

void to_json(nlohmann::json& j, const EvidenceSource& v);
void from_json(const nlohmann::json& j, EvidenceSource& v);

void to_json(nlohmann::json& j, const Rule& v);
void from_json(const nlohmann::json& j, Rule& v);

void to_json(nlohmann::json& j, const Section& v);
void from_json(const nlohmann::json& j, Section& v);

void to_json(nlohmann::json& j, const PolicyIndex& v);
void from_json(const nlohmann::json& j, PolicyIndex& v);

void to_json(nlohmann::json& j, const IterationMetrics& v);
void from_json(const nlohmann::json& j, IterationMetrics& v);

void to_json(nlohmann::json& j, const ResearchState& v);
void from_json(const nlohmann::json& j, ResearchState& v);

void to_json(nlohmann::json& j, const EvalExample& v);
void from_json(const nlohmann::json& j, EvalExample& v);

void to_json(nlohmann::json& j, const PerExampleJudgment& v);
void from_json(const nlohmann::json& j, PerExampleJudgment& v);

void to_json(nlohmann::json& j, const EvalReport& v);
void from_json(const nlohmann::json& j, EvalReport& v);

}  // namespace dpr
