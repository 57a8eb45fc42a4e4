#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dpr {

// Model output rarely arrives as clean JSON. Both parsers apply the same
// repair ladder, in order:
//   1. parse the text as-is;
//   2. strip surrounding ``` code fences (with optional language tag) and
//      parse again;
//   3. take the substring from the first opening bracket to the last
//      closing bracket and parse that;
//   4. give up.
// Throws ParseFailure when the ladder is exhausted or the parsed value has
// the wrong shape.
nlohmann::json parse_json_array(const std::string& text);
nlohmann::json parse_json_object(const std::string& text);

// Keeps the array elements that are objects carrying every required field
// as a string; extra fields are dropped, invalid records are skipped with
// a warning on stderr.
std::vector<nlohmann::json> filter_records(
    const nlohmann::json& array, const std::vector<std::string>& required);

// Keeps the elements that are non-blank strings, trimmed.
std::vector<std::string> string_elements(const nlohmann::json& array);

std::string trim_copy(const std::string& s);

}  // namespace dpr
