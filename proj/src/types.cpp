#include "dpr/types.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "dpr/errors.hpp"

namespace dpr {

namespace {

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c); });
}

}  // namespace

const DomainSpec& validate_spec(const DomainSpec& spec) {
    if (spec.name.empty() || is_blank(spec.name)) {
        throw EmptyField("domain spec: name is blank");
    }
    if (spec.definition.empty() || is_blank(spec.definition)) {
        throw EmptyField("domain spec: definition is blank");
    }
    return spec;
}

std::string normalize_rule_text(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::vector<const Rule*> active_rules(const std::vector<Rule>& rules) {
    std::vector<const Rule*> out;
    for (const Rule& r : rules) {
        if (r.status == RuleStatus::active) {
            out.push_back(&r);
        }
    }
    return out;
}

const Rule* find_rule(const std::vector<Rule>& rules, const std::string& id) {
    for (const Rule& r : rules) {
        if (r.id == id) {
            return &r;
        }
    }
    return nullptr;
}

void check_partition(const ResearchState& state) {
    std::unordered_set<std::string> active;
    for (const Rule& r : state.rules) {
        if (r.status == RuleStatus::active) {
            active.insert(r.id);
        }
    }
    std::unordered_set<std::string> seen;
    for (const Section& s : state.index.sections) {
        if (s.rule_ids.empty()) {
            throw CorruptState("index: section '" + s.title + "' is empty");
        }
        for (const std::string& id : s.rule_ids) {
            if (!active.count(id)) {
                throw CorruptState("index: section '" + s.title +
                                   "' references non-active rule " + id);
            }
            if (!seen.insert(id).second) {
                throw CorruptState("index: rule " + id +
                                   " appears in more than one section");
            }
        }
    }
    if (state.index.iteration > 0 && seen.size() != active.size()) {
        throw CorruptState("index: active rules not fully covered by sections");
    }
}

void check_lineage(const std::vector<Rule>& rules) {
    std::unordered_map<std::string, const Rule*> by_id;
    for (const Rule& r : rules) {
        if (!by_id.emplace(r.id, &r).second) {
            throw CorruptState("lineage: duplicate rule id " + r.id);
        }
    }
    for (const Rule& r : rules) {
        const bool merged = r.status == RuleStatus::merged_away;
        if (merged != r.merged_into.has_value()) {
            throw CorruptState("lineage: rule " + r.id +
                               " status inconsistent with merged_into");
        }
        // Following merged_into pointers must terminate at an active rule.
        std::unordered_set<std::string> visited{r.id};
        const Rule* cur = &r;
        while (cur->status == RuleStatus::merged_away) {
            auto it = by_id.find(*cur->merged_into);
            if (it == by_id.end()) {
                throw CorruptState("lineage: rule " + cur->id +
                                   " merged into unknown rule");
            }
            cur = it->second;
            if (!visited.insert(cur->id).second) {
                throw CorruptState("lineage: cycle through rule " + cur->id);
            }
        }
    }
}

}  // namespace dpr
