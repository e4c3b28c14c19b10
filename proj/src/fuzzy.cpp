#include "tacdss/fuzzy.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "tacdss/error.hpp"

namespace tacdss {

namespace {

std::string describe(const std::string& name) {
  return "variable '" + name + "'";
}

}  // namespace

LinguisticVariable::LinguisticVariable(std::string name, double domain_min,
                                       double domain_max,
                                       std::vector<double> centers,
                                       std::vector<std::string> labels)
    : name_(std::move(name)),
      domain_min_(domain_min),
      domain_max_(domain_max),
      centers_(std::move(centers)),
      labels_(std::move(labels)) {
  if (!std::isfinite(domain_min_) || !std::isfinite(domain_max_) ||
      !(domain_min_ < domain_max_)) {
    throw ValidationError(describe(name_) + ": domain must satisfy min < max");
  }
  if (centers_.size() < 2) {
    throw ValidationError(describe(name_) + ": needs at least 2 MF centers");
  }
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double c = centers_[i];
    if (!std::isfinite(c) || c < domain_min_ || c > domain_max_) {
      throw ValidationError(describe(name_) + ": center " + std::to_string(i) +
                            " lies outside the domain");
    }
    if (i > 0 && !(centers_[i - 1] < c)) {
      throw ValidationError(describe(name_) +
                            ": centers must be strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }
  if (labels_.empty()) {
    labels_.reserve(centers_.size());
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      labels_.push_back("mf" + std::to_string(i));
    }
  } else if (labels_.size() != centers_.size()) {
    throw ValidationError(describe(name_) +
                          ": label count differs from center count");
  }
}

LinguisticVariable LinguisticVariable::with_centers(std::vector<double> centers) const {
  return LinguisticVariable(name_, domain_min_, domain_max_, std::move(centers),
                            labels_);
}

double partition_degree(std::span<const double> centers, std::size_t mf,
                        double x) noexcept {
  const std::size_t last = centers.size() - 1;
  const double c = centers[mf];
  if (mf == 0 && x <= c) return 1.0;
  if (mf == last && x >= c) return 1.0;
  if (x <= c) {
    const double left = centers[mf - 1];
    if (x <= left) return 0.0;
    return (x - left) / (c - left);
  }
  const double right = centers[mf + 1];
  if (x >= right) return 0.0;
  return (right - x) / (right - c);
}

std::array<double, 3> partition_degree_gradient(std::span<const double> centers,
                                                std::size_t mf,
                                                double x) noexcept {
  // Branches mirror partition_degree exactly, including at the kinks.
  std::array<double, 3> g{0.0, 0.0, 0.0};
  const std::size_t last = centers.size() - 1;
  const double c = centers[mf];
  if (mf == 0 && x <= c) return g;
  if (mf == last && x >= c) return g;
  if (x <= c) {
    const double left = centers[mf - 1];
    if (x <= left) return g;
    const double span = c - left;
    g[0] = (x - c) / (span * span);
    g[1] = -(x - left) / (span * span);
    return g;
  }
  const double right = centers[mf + 1];
  if (x >= right) return g;
  const double span = right - c;
  g[1] = (right - x) / (span * span);
  g[2] = (x - c) / (span * span);
  return g;
}

double membership(const LinguisticVariable& var, std::size_t mf_index, double x) {
  if (mf_index >= var.size()) {
    throw IndexError(describe(var.name()) + ": no MF with index " +
                     std::to_string(mf_index));
  }
  if (!var.contains(x)) {
    std::ostringstream msg;
    msg << describe(var.name()) << ": value " << x << " outside ["
        << var.domain_min() << ", " << var.domain_max() << "]";
    throw DomainError(msg.str());
  }
  return partition_degree(var.centers(), mf_index, x);
}

InferenceConfig InferenceConfig::classic() {
  return {TNorm::min, Implication::min, Aggregation::max, Defuzzifier::centroid,
          201, WeightMode::scale_firing};
}

InferenceConfig InferenceConfig::trainable() {
  return {TNorm::product, Implication::product, Aggregation::weighted_sum,
          Defuzzifier::center_average, 201, WeightMode::scale_firing};
}

bool InferenceConfig::is_differentiable() const noexcept {
  return tnorm == TNorm::product && defuzzifier == Defuzzifier::center_average;
}

void InferenceConfig::validate() const {
  if (centroid_resolution < 11) {
    throw ConfigError("centroid resolution must be at least 11");
  }
}

FuzzySystem::FuzzySystem(std::vector<LinguisticVariable> inputs,
                         LinguisticVariable output, std::vector<FuzzyRule> rules,
                         InferenceConfig config)
    : inputs_(std::move(inputs)),
      output_(std::move(output)),
      rules_(std::move(rules)),
      config_(config) {
  config_.validate();
  if (inputs_.empty()) throw ValidationError("system needs at least one input");
  if (rules_.empty()) throw ValidationError("system needs at least one rule");

  std::map<std::vector<std::size_t>, std::size_t> seen;
  for (std::size_t r = 0; r < rules_.size(); ++r) {
    const FuzzyRule& rule = rules_[r];
    const std::string where = "rule " + std::to_string(r);
    if (rule.antecedent.size() != inputs_.size()) {
      throw ValidationError(where + ": antecedent length differs from input count");
    }
    for (std::size_t j = 0; j < inputs_.size(); ++j) {
      if (rule.antecedent[j] >= inputs_[j].size()) {
        throw ValidationError(where + ": MF index out of range for " +
                              describe(inputs_[j].name()));
      }
    }
    if (rule.consequent >= output_.size()) {
      throw ValidationError(where + ": consequent index out of range for " +
                            describe(output_.name()));
    }
    if (!(rule.weight > 0.0 && rule.weight <= 1.0)) {
      throw ValidationError(where + ": weight must lie in (0, 1]");
    }
    if (auto [it, fresh] = seen.emplace(rule.antecedent, r); !fresh) {
      throw ValidationError(where + ": duplicate antecedent of rule " +
                            std::to_string(it->second));
    }
  }
}

FuzzySystem::FuzzySystem(SystemSkeleton skeleton, std::vector<FuzzyRule> rules)
    : FuzzySystem(std::move(skeleton.inputs), std::move(skeleton.output),
                  std::move(rules), skeleton.config) {}

FuzzySystem FuzzySystem::with_config(InferenceConfig config) const {
  return FuzzySystem(inputs_, output_, rules_, config);
}

FuzzySystem FuzzySystem::with_variables(std::vector<LinguisticVariable> inputs,
                                        LinguisticVariable output) const {
  return FuzzySystem(std::move(inputs), std::move(output), rules_, config_);
}

Memberships fuzzify(const FuzzySystem& system, std::span<const double> x) {
  const auto& inputs = system.inputs();
  if (x.size() != inputs.size()) {
    throw DataError("expected " + std::to_string(inputs.size()) +
                    " input values, got " + std::to_string(x.size()));
  }
  Memberships out(inputs.size());
  for (std::size_t j = 0; j < inputs.size(); ++j) {
    const LinguisticVariable& var = inputs[j];
    if (!var.contains(x[j])) {
      std::ostringstream msg;
      msg << describe(var.name()) << ": value " << x[j] << " outside ["
          << var.domain_min() << ", " << var.domain_max() << "]";
      throw DomainError(msg.str());
    }
    out[j].resize(var.size());
    for (std::size_t m = 0; m < var.size(); ++m) {
      out[j][m] = partition_degree(var.centers(), m, x[j]);
    }
  }
  return out;
}

double fire_rule(const FuzzyRule& rule, const Memberships& memberships,
                 const InferenceConfig& config) {
  if (rule.antecedent.size() != memberships.size()) {
    throw IndexError("rule antecedent length differs from input count");
  }
  double firing = 1.0;
  for (std::size_t j = 0; j < rule.antecedent.size(); ++j) {
    const auto& degrees = memberships[j];
    if (rule.antecedent[j] >= degrees.size()) {
      throw IndexError("rule references MF " + std::to_string(rule.antecedent[j]) +
                       " of input " + std::to_string(j));
    }
    const double mu = degrees[rule.antecedent[j]];
    firing = config.tnorm == TNorm::min ? std::min(firing, mu) : firing * mu;
  }
  if (config.weight_mode == WeightMode::scale_firing) firing *= rule.weight;
  return firing;
}

namespace {

// Strength with which each output MF is asserted. Equivalent to applying
// implication then aggregation rule by rule: min/product implications are
// monotone in the firing, so max-aggregation only needs the largest firing
// per consequent, and weighted-sum needs their sum.
std::vector<double> consequent_strengths(const FuzzySystem& system,
                                         std::span<const double> firings) {
  std::vector<double> strength(system.output().size(), 0.0);
  const auto& rules = system.rules();
  const bool sum = system.config().aggregation == Aggregation::weighted_sum;
  for (std::size_t r = 0; r < rules.size(); ++r) {
    double& s = strength[rules[r].consequent];
    s = sum ? s + firings[r] : std::max(s, firings[r]);
  }
  return strength;
}

}  // namespace

Defuzzified defuzzify(const FuzzySystem& system, std::span<const double> firings) {
  if (firings.size() != system.rules().size()) {
    throw DataError("firing count differs from rule count");
  }
  const LinguisticVariable& out = system.output();
  const double midpoint = 0.5 * (out.domain_min() + out.domain_max());
  Defuzzified result;

  if (std::all_of(firings.begin(), firings.end(), [](double f) { return f <= 0.0; })) {
    result.crisp = midpoint;
    result.fallback = true;
    return result;
  }

  const InferenceConfig& config = system.config();
  if (config.defuzzifier == Defuzzifier::center_average) {
    double num = 0.0;
    double den = 0.0;
    result.terms.reserve(firings.size());
    for (std::size_t r = 0; r < firings.size(); ++r) {
      const double center = out.centers()[system.rules()[r].consequent];
      result.terms.push_back({firings[r], center});
      num += firings[r] * center;
      den += firings[r];
    }
    result.crisp = std::clamp(num / den, out.domain_min(), out.domain_max());
    return result;
  }

  // Centroid: uniform samples, trapezoidal weights.
  const std::vector<double> strength = consequent_strengths(system, firings);
  const int n = config.centroid_resolution;
  const double lo = out.domain_min();
  const double step = out.width() / (n - 1);
  const bool sum = config.aggregation == Aggregation::weighted_sum;
  double num = 0.0;
  double den = 0.0;
  result.curve.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double y = k == n - 1 ? out.domain_max() : lo + step * k;
    double agg = 0.0;
    for (std::size_t m = 0; m < strength.size(); ++m) {
      if (strength[m] <= 0.0) continue;
      const double mu = partition_degree(out.centers(), m, y);
      const double clipped = config.implication == Implication::min
                                 ? std::min(strength[m], mu)
                                 : strength[m] * mu;
      agg = sum ? agg + clipped : std::max(agg, clipped);
    }
    result.curve.push_back({y, agg});
    const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
    num += w * y * agg;
    den += w * agg;
  }
  if (den <= 0.0) {
    result.crisp = midpoint;
    result.fallback = true;
    return result;
  }
  result.crisp = std::clamp(num / den, out.domain_min(), out.domain_max());
  return result;
}

InferenceResult infer(const FuzzySystem& system, std::span<const double> x) {
  InferenceTrace trace;
  trace.memberships = fuzzify(system, x);
  trace.firings.reserve(system.rules().size());
  for (const FuzzyRule& rule : system.rules()) {
    trace.firings.push_back(fire_rule(rule, trace.memberships, system.config()));
  }
  Defuzzified d = defuzzify(system, trace.firings);
  trace.crisp_output = d.crisp;
  trace.fallback = d.fallback;
  trace.aggregate_curve = std::move(d.curve);
  trace.center_terms = std::move(d.terms);
  return {trace.crisp_output, std::move(trace)};
}

double predict(const FuzzySystem& system, std::span<const double> x) {
  const Memberships mu = fuzzify(system, x);
  std::vector<double> firings;
  firings.reserve(system.rules().size());
  for (const FuzzyRule& rule : system.rules()) {
    firings.push_back(fire_rule(rule, mu, system.config()));
  }
  return defuzzify(system, firings).crisp;
}

double rmse(const FuzzySystem& system, std::span<const TrainingSample> data) {
  if (data.empty()) throw DataError("rmse of an empty dataset");
  double sq = 0.0;
  for (const TrainingSample& s : data) {
    const double e = s.target - predict(system, s.inputs);
    sq += e * e;
  }
  return std::sqrt(sq / static_cast<double>(data.size()));
}

std::string to_string(TNorm t) { return t == TNorm::min ? "min" : "product"; }
std::string to_string(Implication i) {
  return i == Implication::min ? "min" : "product";
}
std::string to_string(Aggregation a) {
  return a == Aggregation::max ? "max" : "weighted-sum";
}
std::string to_string(Defuzzifier d) {
  return d == Defuzzifier::centroid ? "centroid" : "center-average";
}
std::string to_string(WeightMode w) {
  return w == WeightMode::scale_firing ? "scale-firing" : "ignore";
}

}  // namespace tacdss
