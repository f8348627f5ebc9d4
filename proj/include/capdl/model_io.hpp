#pragma once

#include <string>

#include "capdl/encoding.hpp"

namespace capdl {

struct ParsedModel {
    SafetyModel sm;
    AtomSet init;
};

// Line-oriented model format with `#` comments:
//   atom c1 c2          optional declarations (auto-interned elsewhere too)
//   edge c1 c2 -> c3 c4 tail -> heads; multi-head edges split at load
//   forbidden c12
//   init c1 c2
ParsedModel parse_model_text(const std::string& text);
std::string serialize_model_text(const SafetyModel& sm, const AtomSet& init);

// JSON equivalent: {"atoms": [...], "edges": [{"tail": [...], "head": [...]}],
// "forbidden": [...], "init": [...]}.
ParsedModel parse_model_json(const std::string& text);
std::string serialize_model_json(const SafetyModel& sm, const AtomSet& init);

}  // namespace capdl
