#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "relaxform/binary_class.hpp"

namespace relaxform {

struct LabeledValue {
  double value;
  BinaryClass label;
};

/// Supervised entropy discretization with the MDL stopping rule of Fayyad and
/// Irani. Candidate cuts are midpoints between consecutive distinct values;
/// among equal-entropy candidates the smallest cut wins. Returns the sorted
/// cut points (empty = a single bin).
std::vector<double> fit_mdlp_cuts(std::span<const LabeledValue> values);

/// Unsupervised alternative: at most `bins` equal-frequency bins.
std::vector<double> fit_equal_frequency_cuts(std::span<const double> values, std::size_t bins);

/// Index of the bin containing `value`; bins are [c_{i-1}, c_i).
std::size_t bin_index(std::span<const double> cuts, double value);

/// Human readable interval such as "[20.5,71)" or "[-inf,20.5)".
std::string interval_label(std::span<const double> cuts, std::size_t bin);

}  // namespace relaxform
