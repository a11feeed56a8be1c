#pragma once

#include <string_view>

namespace relaxform {

/// Completeness requirement of a target field. The numeric values double as
/// state indices of the target node, so Required is always state 0.
enum class BinaryClass { Required = 0, Optional = 1 };

inline std::string_view to_string(BinaryClass c) { return c == BinaryClass::Required ? "required" : "optional"; }

}  // namespace relaxform
