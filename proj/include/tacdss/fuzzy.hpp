#pragma once

// Triangular MF partitions and the Mamdani inference engine.

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace tacdss {

/// An input or output dimension with an ordered triangular MF partition.
///
/// The partition is fully determined by the center vector: interior MFs are
/// triangles whose feet sit on the neighbouring centers, and the first/last
/// MFs are shoulders saturating at 1 toward the domain edges. The degrees of
/// all MFs sum to 1 at every point of the domain.
class LinguisticVariable {
 public:
  /// Throws ValidationError when the centers are not strictly increasing,
  /// leave the domain, number fewer than two, or mismatch the labels. An
  /// empty label list is replaced by "mf0", "mf1", ...
  LinguisticVariable(std::string name, double domain_min, double domain_max,
                     std::vector<double> centers,
                     std::vector<std::string> labels = {});

  const std::string& name() const noexcept { return name_; }
  double domain_min() const noexcept { return domain_min_; }
  double domain_max() const noexcept { return domain_max_; }
  double width() const noexcept { return domain_max_ - domain_min_; }
  const std::vector<double>& centers() const noexcept { return centers_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t size() const noexcept { return centers_.size(); }

  bool contains(double x) const noexcept {
    return x >= domain_min_ && x <= domain_max_;
  }

  /// Same variable with a replacement center vector (validated).
  LinguisticVariable with_centers(std::vector<double> centers) const;

  friend bool operator==(const LinguisticVariable&,
                         const LinguisticVariable&) = default;

 private:
  std::string name_;
  double domain_min_;
  double domain_max_;
  std::vector<double> centers_;
  std::vector<std::string> labels_;
};

// Unchecked kernels over a raw center vector; the partition shape lives here.
double partition_degree(std::span<const double> centers, std::size_t mf,
                        double x) noexcept;

/// Partial derivatives of partition_degree(centers, mf, x) with respect to
/// centers[mf-1], centers[mf] and centers[mf+1]. Slots for missing
/// neighbours are zero.
std::array<double, 3> partition_degree_gradient(std::span<const double> centers,
                                                std::size_t mf,
                                                double x) noexcept;

/// Degree of x in MF `mf_index` of `var`. Throws DomainError / IndexError.
double membership(const LinguisticVariable& var, std::size_t mf_index, double x);

struct FuzzyRule {
  std::vector<std::size_t> antecedent;  // one MF index per input
  std::size_t consequent = 0;           // output MF index
  double weight = 1.0;                  // in (0, 1]

  friend bool operator==(const FuzzyRule&, const FuzzyRule&) = default;
};

enum class TNorm { min, product };
enum class Implication { min, product };
enum class Aggregation { max, weighted_sum };
enum class Defuzzifier { centroid, center_average };
enum class WeightMode { scale_firing, ignore };

struct InferenceConfig {
  TNorm tnorm = TNorm::product;
  Implication implication = Implication::product;
  Aggregation aggregation = Aggregation::weighted_sum;
  Defuzzifier defuzzifier = Defuzzifier::center_average;
  int centroid_resolution = 201;  // output samples, centroid mode only
  WeightMode weight_mode = WeightMode::scale_firing;

  /// min / min / max / centroid(201)
  static InferenceConfig classic();
  /// product / product / weighted-sum / center-average (differentiable)
  static InferenceConfig trainable();

  /// True when the crisp output is a closed-form differentiable function of
  /// the MF centers (product t-norm feeding a center-average defuzzifier).
  bool is_differentiable() const noexcept;

  void validate() const;

  friend bool operator==(const InferenceConfig&, const InferenceConfig&) = default;
};

struct TrainingSample {
  std::vector<double> inputs;
  double target = 0.0;

  friend bool operator==(const TrainingSample&, const TrainingSample&) = default;
};

using Memberships = std::vector<std::vector<double>>;

/// Variables and configuration without a rule base.
struct SystemSkeleton {
  std::vector<LinguisticVariable> inputs;
  LinguisticVariable output;
  InferenceConfig config;
};

/// The deployable model. Immutable once built; all invariants are checked
/// by the constructor.
class FuzzySystem {
 public:
  FuzzySystem(std::vector<LinguisticVariable> inputs, LinguisticVariable output,
              std::vector<FuzzyRule> rules,
              InferenceConfig config = InferenceConfig::trainable());
  FuzzySystem(SystemSkeleton skeleton, std::vector<FuzzyRule> rules);

  const std::vector<LinguisticVariable>& inputs() const noexcept { return inputs_; }
  const LinguisticVariable& output() const noexcept { return output_; }
  const std::vector<FuzzyRule>& rules() const noexcept { return rules_; }
  const InferenceConfig& config() const noexcept { return config_; }
  std::size_t input_count() const noexcept { return inputs_.size(); }

  SystemSkeleton skeleton() const { return {inputs_, output_, config_}; }
  FuzzySystem with_config(InferenceConfig config) const;
  FuzzySystem with_variables(std::vector<LinguisticVariable> inputs,
                             LinguisticVariable output) const;

  friend bool operator==(const FuzzySystem&, const FuzzySystem&) = default;

 private:
  std::vector<LinguisticVariable> inputs_;
  LinguisticVariable output_;
  std::vector<FuzzyRule> rules_;
  InferenceConfig config_;
};

struct CenterTerm {
  double firing;
  double center;
};

struct CurvePoint {
  double y;
  double degree;
};

struct Defuzzified {
  double crisp = 0.0;
  bool fallback = false;               // no evidence: domain midpoint returned
  std::vector<CurvePoint> curve;       // centroid mode
  std::vector<CenterTerm> terms;       // center-average mode
};

struct InferenceTrace {
  Memberships memberships;
  std::vector<double> firings;
  double crisp_output = 0.0;
  bool fallback = false;
  std::vector<CurvePoint> aggregate_curve;
  std::vector<CenterTerm> center_terms;
};

struct InferenceResult {
  double crisp;
  InferenceTrace trace;
};

/// Per-input per-MF degrees. Throws DataError on dimension mismatch and
/// DomainError on an out-of-domain component.
Memberships fuzzify(const FuzzySystem& system, std::span<const double> x);

double fire_rule(const FuzzyRule& rule, const Memberships& memberships,
                 const InferenceConfig& config);

/// Crisp output from a vector of rule firings. This is the only place the
/// output is computed, so recomputing from a trace's firings is exact.
Defuzzified defuzzify(const FuzzySystem& system, std::span<const double> firings);

InferenceResult infer(const FuzzySystem& system, std::span<const double> x);

/// Crisp output only; skips building the trace.
double predict(const FuzzySystem& system, std::span<const double> x);

double rmse(const FuzzySystem& system, std::span<const TrainingSample> data);

std::string to_string(TNorm);
std::string to_string(Implication);
std::string to_string(Aggregation);
std::string to_string(Defuzzifier);
std::string to_string(WeightMode);

}  // namespace tacdss
