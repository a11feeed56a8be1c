#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <optional>
#include <vector>

namespace relaxform::bn {

/// Complete discrete data, stored column-major. Column i takes values in
/// [0, states[i].size()).
struct DiscreteData {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> states;
  std::vector<std::vector<std::int32_t>> columns;

  std::size_t variables() const { return names.size(); }
  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  std::size_t cardinality(std::size_t v) const { return states[v].size(); }
  std::optional<std::size_t> index_of(std::string_view name) const;

  /// Throws InvalidArgument on ragged columns or out-of-range codes.
  void validate() const;
};

}  // namespace relaxform::bn
