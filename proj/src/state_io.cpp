#include "dpr/state_io.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "dpr/errors.hpp"
#include "dpr/json_io.hpp"

namespace dpr {

std::string state_to_json_text(const ResearchState& state) {
    nlohmann::json j = state;
    return j.dump(2) + "\n";
}

ResearchState state_from_json_text(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw CorruptState("state file: not valid JSON");
    }
    try {
        ResearchState state = j.get<ResearchState>();
        check_lineage(state.rules);
        check_partition(state);
        return state;
    } catch (const CorruptState&) {
        throw;
    } catch (const nlohmann::json::exception& e) {
        throw CorruptState(std::string("state file: ") + e.what());
    }
}

void save_state(const ResearchState& state,
                const std::filesystem::path& file) {
    write_text_file(file, state_to_json_text(state));
}

ResearchState load_state(const std::filesystem::path& file) {
    return state_from_json_text(read_text_file(file));
}

void save_evidence_jsonl(const std::vector<EvidenceSource>& evidence,
                         const std::filesystem::path& file) {
    std::string out;
    for (const EvidenceSource& e : evidence) {
        out += nlohmann::json(e).dump() + "\n";
    }
    write_text_file(file, out);
}

std::vector<EvidenceSource> load_evidence_jsonl(
    const std::filesystem::path& file) {
    std::istringstream in(read_text_file(file));
    std::vector<EvidenceSource> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            throw CorruptState("evidence log: malformed line " +
                               std::to_string(out.size() + 1));
        }
        out.push_back(j.get<EvidenceSource>());
    }
    return out;
}

std::string metrics_to_csv(const std::vector<IterationMetrics>& metrics) {
    std::string out =
        "iteration,queries_issued,evidence_count,candidates_extracted,"
        "rules_after_filter,active_rule_count,cumulative_discovered_count,"
        "section_count\n";
    for (const IterationMetrics& m : metrics) {
        out += std::to_string(m.iteration) + "," +
               std::to_string(m.queries_issued) + "," +
               std::to_string(m.evidence_count) + "," +
               std::to_string(m.candidates_extracted) + "," +
               std::to_string(m.rules_after_filter) + "," +
               std::to_string(m.active_rule_count) + "," +
               std::to_string(m.cumulative_discovered_count) + "," +
               std::to_string(m.section_count) + "\n";
    }
    return out;
}

std::string read_text_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        throw CorruptState("cannot open file: " + file.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text_file(const std::filesystem::path& file,
                     const std::string& content) {
    if (file.has_parent_path()) {
        std::filesystem::create_directories(file.parent_path());
    }
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write file: " + file.string());
    }
    out << content;
}

}  // namespace dpr
