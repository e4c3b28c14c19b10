#pragma once

// Rule-base induction from input/output samples (Wang & Mendel).

#include <cstddef>
#include <span>
#include <vector>

#include "tacdss/fuzzy.hpp"

namespace tacdss::wang_mendel {

struct Region {
  std::size_t mf_index;
  double degree;
};

/// One rule proposed by one sample, scored by the product of its degrees.
struct CandidateRule {
  std::vector<std::size_t> antecedent;
  std::size_t consequent = 0;
  double degree = 0.0;

  friend bool operator==(const CandidateRule&, const CandidateRule&) = default;
};

/// MF with the largest degree at x; ties go to the lower index.
Region assign_region(const LinguisticVariable& var, double x);

/// Product of degrees, accumulated in extended precision and rounded once,
/// so that e.g. 0.8 * 0.2 * 0.6 yields the double nearest 0.096.
double rule_degree(std::span<const double> degrees) noexcept;

CandidateRule candidate_from_sample(const SystemSkeleton& skeleton,
                                    const TrainingSample& sample);

/// Keeps the highest-degree candidate of each antecedent group (first
/// occurrence wins ties) and returns rules sorted by antecedent. The kept
/// degree becomes the rule weight. Throws DataError on empty input.
std::vector<FuzzyRule> resolve_conflicts(std::span<const CandidateRule> candidates);

FuzzySystem learn_rules(const SystemSkeleton& skeleton,
                        std::span<const TrainingSample> data);

}  // namespace tacdss::wang_mendel
