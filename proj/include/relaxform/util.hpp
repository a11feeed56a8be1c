#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace relaxform {

std::string_view trim(std::string_view text);
std::string fold_case(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);
std::string to_hex(std::uint64_t value);

/// Locale-independent decimal parse; rejects trailing garbage and non-finite values.
std::optional<double> parse_number(std::string_view text);

}  // namespace relaxform
