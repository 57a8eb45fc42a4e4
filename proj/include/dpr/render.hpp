#pragma once

#include <string>
#include <vector>

#include "dpr/types.hpp"

namespace dpr {

// Renders the indexed policy as markdown-style plain text: spec header,
// then each section as heading + summary + numbered rule list. Pure
// function of its inputs; identical input yields byte-identical output.
// Throws DanglingRule if a section references a rule that is missing from
// `rules` or not active.
std::string render_policy(const PolicyIndex& index,
                          const std::vector<Rule>& rules);

// Shortened rendering: section titles and summaries only, no rule lists.
// The seed-only index compresses to the bare spec text.
std::string compress_index(const PolicyIndex& index);

}  // namespace dpr
