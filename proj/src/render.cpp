#include "dpr/render.hpp"

#include <unordered_map>

#include "dpr/errors.hpp"

namespace dpr {

namespace {

std::string header(const DomainSpec& spec) {
    return "# Policy: " + spec.name + "\n\n" + spec.definition + "\n";
}

}  // namespace

std::string render_policy(const PolicyIndex& index,
                          const std::vector<Rule>& rules) {
    std::unordered_map<std::string, const Rule*> by_id;
    for (const Rule& r : rules) {
        by_id.emplace(r.id, &r);
    }

    std::string out = header(index.spec);
    for (const Section& section : index.sections) {
        out += "\n## " + section.title + "\n\n" + section.summary + "\n\n";
        int item = 1;
        for (const std::string& id : section.rule_ids) {
            auto it = by_id.find(id);
            if (it == by_id.end() || it->second->status != RuleStatus::active) {
                throw DanglingRule("render: section '" + section.title +
                                   "' references non-active rule " + id);
            }
            out += std::to_string(item++) + ". " + it->second->text + "\n";
        }
    }
    return out;
}

std::string compress_index(const PolicyIndex& index) {
    std::string out = header(index.spec);
    for (const Section& section : index.sections) {
        out += "\n## " + section.title + "\n\n" + section.summary + "\n";
    }
    return out;
}

}  // namespace dpr
