#include "tacdss/wang_mendel.hpp"

#include <algorithm>
#include <map>

#include "tacdss/error.hpp"

namespace tacdss::wang_mendel {

Region assign_region(const LinguisticVariable& var, double x) {
  Region best{0, membership(var, 0, x)};
  for (std::size_t m = 1; m < var.size(); ++m) {
    const double mu = partition_degree(var.centers(), m, x);
    if (mu > best.degree) best = {m, mu};
  }
  return best;
}

double rule_degree(std::span<const double> degrees) noexcept {
  long double product = 1.0L;
  for (double d : degrees) product *= d;
  return static_cast<double>(product);
}

CandidateRule candidate_from_sample(const SystemSkeleton& skeleton,
                                    const TrainingSample& sample) {
  if (sample.inputs.size() != skeleton.inputs.size()) {
    throw DataError("sample has " + std::to_string(sample.inputs.size()) +
                    " inputs, skeleton expects " +
                    std::to_string(skeleton.inputs.size()));
  }
  CandidateRule candidate;
  std::vector<double> degrees;
  degrees.reserve(sample.inputs.size() + 1);
  candidate.antecedent.reserve(sample.inputs.size());
  for (std::size_t j = 0; j < sample.inputs.size(); ++j) {
    const Region r = assign_region(skeleton.inputs[j], sample.inputs[j]);
    candidate.antecedent.push_back(r.mf_index);
    degrees.push_back(r.degree);
  }
  const Region out = assign_region(skeleton.output, sample.target);
  candidate.consequent = out.mf_index;
  degrees.push_back(out.degree);
  candidate.degree = rule_degree(degrees);
  return candidate;
}

std::vector<FuzzyRule> resolve_conflicts(std::span<const CandidateRule> candidates) {
  if (candidates.empty()) throw DataError("no candidate rules to resolve");
  std::map<std::vector<std::size_t>, const CandidateRule*> best;
  for (const CandidateRule& c : candidates) {
    auto [it, fresh] = best.try_emplace(c.antecedent, &c);
    if (!fresh && c.degree > it->second->degree) it->second = &c;
  }
  std::vector<FuzzyRule> rules;
  rules.reserve(best.size());
  for (const auto& [antecedent, c] : best) {
    rules.push_back({antecedent, c->consequent, c->degree});
  }
  return rules;
}

FuzzySystem learn_rules(const SystemSkeleton& skeleton,
                        std::span<const TrainingSample> data) {
  if (data.empty()) throw DataError("cannot learn rules from an empty dataset");
  std::vector<CandidateRule> candidates;
  candidates.reserve(data.size());
  for (const TrainingSample& s : data) {
    candidates.push_back(candidate_from_sample(skeleton, s));
  }
  return FuzzySystem(skeleton, resolve_conflicts(candidates));
}

}  // namespace tacdss::wang_mendel
