#pragma once

#include "tacdss/fuzzy.hpp"

namespace tacdss::testing {

/// Rules learned from the shortest prefix of the seed-42 dataset that covers
/// 16 distinct cells of the 3-MF-per-factor grid.
FuzzySystem sixteen_rule_model();

}  // namespace tacdss::testing
