#pragma once

// Flat center-vector layout shared by the gradient and genetic tuners:
// all input centers variable by variable, then the output centers.

#include <cstddef>
#include <span>
#include <vector>

#include "tacdss/fuzzy.hpp"

namespace tacdss {

/// Slice of the flat vector owned by one variable.
struct CenterSlice {
  std::size_t offset;
  std::size_t count;
  double domain_min;
  double domain_max;
};

/// One slice per input, then one for the output.
std::vector<CenterSlice> center_layout(const FuzzySystem& system);

std::vector<double> flatten_centers(const FuzzySystem& system);

/// Minimum spacing enforced between neighbouring centers by repair.
double min_center_gap(double domain_min, double domain_max) noexcept;

/// Clamp to the domain, sort ascending, then push neighbours apart to at
/// least min_center_gap. The result is strictly increasing and in-domain.
std::vector<double> repair_centers(std::span<const double> centers,
                                   double domain_min, double domain_max);

/// True when every slice is strictly increasing and inside its domain.
bool centers_valid(const FuzzySystem& system, std::span<const double> flat);

/// System with centers replaced by `flat`; each slice is repaired first.
/// Throws DataError on a length mismatch.
FuzzySystem apply_centers(const FuzzySystem& system, std::span<const double> flat);

/// Like apply_centers but without repair; throws ValidationError when `flat`
/// is not already valid.
FuzzySystem replace_centers(const FuzzySystem& system, std::span<const double> flat);

}  // namespace tacdss
