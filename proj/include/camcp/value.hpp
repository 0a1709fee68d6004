#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace camcp {

// The tree value stored in the context store and carried by every message:
// null, boolean, number, text, list or text-keyed map. Object keys are kept
// sorted, which the canonical encodings rely on.
using Value = nlohmann::json;

// Deep structural equality. Numbers compare by numeric value (1 == 1.0),
// text by exact bytes.
bool values_equal(const Value& a, const Value& b);

// True if `v` only uses the six context-value shapes (no binary, no
// discarded, no non-finite floats).
bool is_context_value(const Value& v);

// Single-line canonical text: sorted keys, no whitespace.
std::string canonical(const Value& v);

// Parses text into a Value; throws nlohmann::json::parse_error.
Value parse_value(std::string_view text);

// Returns "null", "boolean", "number", "text", "list" or "map".
std::string_view shape_name(const Value& v);

}  // namespace camcp
