#include "dpr/json_repair.hpp"

#include <cctype>
#include <cstdio>

#include "dpr/errors.hpp"

namespace dpr {

namespace {

nlohmann::json try_parse(const std::string& text) {
    return nlohmann::json::parse(text, nullptr, false);
}

// Removes a leading ```lang fence and a trailing ``` fence if both exist.
std::string strip_fences(const std::string& text) {
    std::string t = trim_copy(text);
    if (t.rfind("```", 0) != 0) {
        return t;
    }
    std::size_t start = t.find('\n');
    std::size_t end = t.rfind("```");
    if (start == std::string::npos || end <= start) {
        return t;
    }
    return trim_copy(t.substr(start + 1, end - start - 1));
}

nlohmann::json parse_with_ladder(const std::string& text, char open,
                                 char close, const char* shape) {
    nlohmann::json j = try_parse(trim_copy(text));
    if (j.is_discarded()) {
        j = try_parse(strip_fences(text));
    }
    if (j.is_discarded()) {
        const std::size_t first = text.find(open);
        const std::size_t last = text.rfind(close);
        if (first != std::string::npos && last != std::string::npos &&
            last > first) {
            j = try_parse(text.substr(first, last - first + 1));
        }
    }
    if (j.is_discarded()) {
        throw ParseFailure(std::string("no parseable JSON ") + shape +
                           " in response");
    }
    return j;
}

}  // namespace

std::string trim_copy(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

nlohmann::json parse_json_array(const std::string& text) {
    nlohmann::json j = parse_with_ladder(text, '[', ']', "array");
    if (!j.is_array()) {
        throw ParseFailure("response parsed but is not a JSON array");
    }
    return j;
}

nlohmann::json parse_json_object(const std::string& text) {
    nlohmann::json j = parse_with_ladder(text, '{', '}', "object");
    if (!j.is_object()) {
        throw ParseFailure("response parsed but is not a JSON object");
    }
    return j;
}

std::vector<nlohmann::json> filter_records(
    const nlohmann::json& array, const std::vector<std::string>& required) {
    std::vector<nlohmann::json> out;
    for (const auto& item : array) {
        if (!item.is_object()) {
            std::fprintf(stderr, "warn: dropping non-object record\n");
            continue;
        }
        bool ok = true;
        nlohmann::json record;
        for (const std::string& field : required) {
            auto it = item.find(field);
            if (it == item.end() || !it->is_string() ||
                trim_copy(it->get<std::string>()).empty()) {
                ok = false;
                break;
            }
            record[field] = trim_copy(it->get<std::string>());
        }
        if (!ok) {
            std::fprintf(stderr,
                         "warn: dropping record missing required fields\n");
            continue;
        }
        out.push_back(std::move(record));
    }
    return out;
}

std::vector<std::string> string_elements(const nlohmann::json& array) {
    std::vector<std::string> out;
    for (const auto& item : array) {
        if (!item.is_string()) {
            continue;
        }
        std::string s = trim_copy(item.get<std::string>());
        if (!s.empty()) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

}  // namespace dpr
