#include "dpr/json_io.hpp"

#include "dpr/errors.hpp"

namespace dpr {

namespace {

template <typename T>
void get_opt(const nlohmann::json& j, const char* key, std::optional<T>& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) {
        out = it->get<T>();
    } else {
        out.reset();
    }
}

template <typename T>
void put_opt(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    if (v.has_value()) {
        j[key] = *v;
    }
}

}  // namespace

std::string to_string(ChunkMode m) {
    return m == ChunkMode::snippet_only ? "snippet_only" : "full_page";
}

std::string to_string(RuleStatus s) {
    return s == RuleStatus::active ? "active" : "merged_away";
}

std::string to_string(Label l) { return l == Label::safe ? "safe" : "unsafe"; }

std::string to_string(EvalMode m) {
    return m == EvalMode::single_sample ? "single_sample" : "majority_vote";
}

ChunkMode chunk_mode_from_string(const std::string& s) {
    if (s == "snippet_only") return ChunkMode::snippet_only;
    if (s == "full_page") return ChunkMode::full_page;
    throw CorruptState("unknown chunk_mode: " + s);
}

RuleStatus rule_status_from_string(const std::string& s) {
    if (s == "active") return RuleStatus::active;
    if (s == "merged_away") return RuleStatus::merged_away;
    throw CorruptState("unknown rule status: " + s);
}

Label label_from_string(const std::string& s) {
    if (s == "safe") return Label::safe;
    if (s == "unsafe") return Label::unsafe;
    throw CorruptState("unknown label: " + s);
}

EvalMode eval_mode_from_string(const std::string& s) {
    if (s == "single_sample") return EvalMode::single_sample;
    if (s == "majority_vote") return EvalMode::majority_vote;
    throw CorruptState("unknown eval mode: " + s);
}

void to_json(nlohmann::json& j, const DomainSpec& v) {
    j = nlohmann::json{{"name", v.name}, {"definition", v.definition}};
}

void from_json(const nlohmann::json& j, DomainSpec& v) {
    j.at("name").get_to(v.name);
    j.at("definition").get_to(v.definition);
}

void to_json(nlohmann::json& j, const ResearchConfig& v) {
    j = nlohmann::json{
        {"k", v.k},
        {"n", v.n},
        {"m", v.m},
        {"relevance_threshold", v.relevance_threshold},
        {"queries_per_iteration_cap", v.queries_per_iteration_cap},
        {"chunk_mode", to_string(v.chunk_mode)},
        {"chunk_size", v.chunk_size},
        {"rng_seed", v.rng_seed},
        {"kmeans_restarts", v.kmeans_restarts},
    };
}

void from_json(const nlohmann::json& j, ResearchConfig& v) {
    v = ResearchConfig{};
    if (j.contains("k")) j.at("k").get_to(v.k);
    if (j.contains("n")) j.at("n").get_to(v.n);
    if (j.contains("m")) j.at("m").get_to(v.m);
    if (j.contains("relevance_threshold"))
        j.at("relevance_threshold").get_to(v.relevance_threshold);
    if (j.contains("queries_per_iteration_cap"))
        j.at("queries_per_iteration_cap").get_to(v.queries_per_iteration_cap);
    if (j.contains("chunk_mode"))
        v.chunk_mode = chunk_mode_from_string(j.at("chunk_mode"));
    if (j.contains("chunk_size")) j.at("chunk_size").get_to(v.chunk_size);
    if (j.contains("rng_seed")) j.at("rng_seed").get_to(v.rng_seed);
    if (j.contains("kmeans_restarts"))
        j.at("kmeans_restarts").get_to(v.kmeans_restarts);
    if (v.k < 0 || v.n < 1 || v.m < 1 || v.relevance_threshold < 0 ||
        v.relevance_threshold > 10 || v.queries_per_iteration_cap < 1 ||
        v.chunk_size < 1 || v.kmeans_restarts < 1) {
        throw CorruptState("research config out of range");
    }
}

void to_json(nlohmann::json& j, const EvidenceSource& v) {
    j = nlohmann::json{
        {"query", v.query},   {"url", v.url},
        {"host", v.host},     {"title", v.title},
        {"snippet", v.snippet},
        {"retrieved_at_iteration", v.retrieved_at_iteration},
    };
    put_opt(j, "fetched_body", v.fetched_body);
}

void from_json(const nlohmann::json& j, EvidenceSource& v) {
    j.at("query").get_to(v.query);
    j.at("url").get_to(v.url);
    j.at("host").get_to(v.host);
    j.at("title").get_to(v.title);
    j.at("snippet").get_to(v.snippet);
    j.at("retrieved_at_iteration").get_to(v.retrieved_at_iteration);
    get_opt(j, "fetched_body", v.fetched_body);
}

void to_json(nlohmann::json& j, const Rule& v) {
    j = nlohmann::json{
        {"id", v.id},
        {"text", v.text},
        {"supporting_text", v.supporting_text},
        {"source_url", v.source_url},
        {"iteration_discovered", v.iteration_discovered},
        {"status", to_string(v.status)},
        {"merged_from", v.merged_from},
    };
    put_opt(j, "relevance_score", v.relevance_score);
    put_opt(j, "merged_into", v.merged_into);
    put_opt(j, "keyphrase", v.keyphrase);
}

void from_json(const nlohmann::json& j, Rule& v) {
    j.at("id").get_to(v.id);
    j.at("text").get_to(v.text);
    j.at("supporting_text").get_to(v.supporting_text);
    j.at("source_url").get_to(v.source_url);
    j.at("iteration_discovered").get_to(v.iteration_discovered);
    v.status = rule_status_from_string(j.at("status"));
    j.at("merged_from").get_to(v.merged_from);
    get_opt(j, "relevance_score", v.relevance_score);
    get_opt(j, "merged_into", v.merged_into);
    get_opt(j, "keyphrase", v.keyphrase);
}

void to_json(nlohmann::json& j, const Section& v) {
    j = nlohmann::json{
        {"title", v.title},
        {"summary", v.summary},
        {"rule_ids", v.rule_ids},
        {"keyphrases", v.keyphrases},
    };
}

void from_json(const nlohmann::json& j, Section& v) {
    j.at("title").get_to(v.title);
    j.at("summary").get_to(v.summary);
    j.at("rule_ids").get_to(v.rule_ids);
    j.at("keyphrases").get_to(v.keyphrases);
}

void to_json(nlohmann::json& j, const PolicyIndex& v) {
    j = nlohmann::json{
        {"spec", v.spec},
        {"sections", v.sections},
        {"iteration", v.iteration},
    };
}

void from_json(const nlohmann::json& j, PolicyIndex& v) {
    j.at("spec").get_to(v.spec);
    j.at("sections").get_to(v.sections);
    j.at("iteration").get_to(v.iteration);
}

void to_json(nlohmann::json& j, const IterationMetrics& v) {
    j = nlohmann::json{
        {"iteration", v.iteration},
        {"queries_issued", v.queries_issued},
        {"evidence_count", v.evidence_count},
        {"candidates_extracted", v.candidates_extracted},
        {"rules_after_filter", v.rules_after_filter},
        {"active_rule_count", v.active_rule_count},
        {"cumulative_discovered_count", v.cumulative_discovered_count},
        {"section_count", v.section_count},
    };
}

void from_json(const nlohmann::json& j, IterationMetrics& v) {
    j.at("iteration").get_to(v.iteration);
    j.at("queries_issued").get_to(v.queries_issued);
    j.at("evidence_count").get_to(v.evidence_count);
    j.at("candidates_extracted").get_to(v.candidates_extracted);
    j.at("rules_after_filter").get_to(v.rules_after_filter);
    j.at("active_rule_count").get_to(v.active_rule_count);
    j.at("cumulative_discovered_count").get_to(v.cumulative_discovered_count);
    j.at("section_count").get_to(v.section_count);
}

void to_json(nlohmann::json& j, const ResearchState& v) {
    j = nlohmann::json{
        {"version", 1},
        {"spec", v.spec},
        {"config", v.config},
        {"iteration", v.iteration},
        {"evidence_log", v.evidence_log},
        {"rules", v.rules},
        {"index", v.index},
        {"metrics", v.metrics},
    };
}

void from_json(const nlohmann::json& j, ResearchState& v) {
    if (j.value("version", 0) != 1) {
        throw CorruptState("state file: unsupported version");
    }
    j.at("spec").get_to(v.spec);
    j.at("config").get_to(v.config);
    j.at("iteration").get_to(v.iteration);
    j.at("evidence_log").get_to(v.evidence_log);
    j.at("rules").get_to(v.rules);
    j.at("index").get_to(v.index);
    j.at("metrics").get_to(v.metrics);
}

void to_json(nlohmann::json& j, const EvalExample& v) {
    j = nlohmann::json{
        {"id", v.id},
        {"content", v.content},
        {"gold_label", to_string(v.gold_label)},
    };
    if (!v.attachments.empty()) {
        j["attachments"] = v.attachments;
    }
}

void from_json(const nlohmann::json& j, EvalExample& v) {
    j.at("id").get_to(v.id);
    j.at("content").get_to(v.content);
    v.gold_label = label_from_string(j.at("gold_label"));
    v.attachments.clear();
    if (j.contains("attachments")) {
        j.at("attachments").get_to(v.attachments);
    }
}

void to_json(nlohmann::json& j, const PerExampleJudgment& v) {
    nlohmann::json samples = nlohmann::json::array();
    for (Label l : v.samples) {
        samples.push_back(to_string(l));
    }
    j = nlohmann::json{
        {"id", v.example_id},
        {"samples", samples},
        {"final", to_string(v.final_label)},
        {"flagged", v.flagged},
    };
}

void from_json(const nlohmann::json& j, PerExampleJudgment& v) {
    j.at("id").get_to(v.example_id);
    v.samples.clear();
    for (const auto& s : j.at("samples")) {
        v.samples.push_back(label_from_string(s));
    }
    v.final_label = label_from_string(j.at("final"));
    j.at("flagged").get_to(v.flagged);
}

void to_json(nlohmann::json& j, const EvalReport& v) {
    j = nlohmann::json{
        {"domain", v.domain},
        {"mode", to_string(v.mode)},
        {"tp", v.tp},
        {"fp", v.fp},
        {"fn", v.fn},
        {"tn", v.tn},
        {"skipped", v.skipped},
        {"f1", v.f1},
        {"per_example", v.per_example},
    };
}

void from_json(const nlohmann::json& j, EvalReport& v) {
    j.at("domain").get_to(v.domain);
    v.mode = eval_mode_from_string(j.at("mode"));
    j.at("tp").get_to(v.tp);
    j.at("fp").get_to(v.fp);
    j.at("fn").get_to(v.fn);
    j.at("tn").get_to(v.tn);
    j.at("skipped").get_to(v.skipped);
    j.at("f1").get_to(v.f1);
    j.at("per_example").get_to(v.per_example);
}

}  // namespace dpr
