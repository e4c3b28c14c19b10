#pragma once

// Tactical air-combat decision factors, the crisp expert score used to
// synthesise training data, and the reference scenarios.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tacdss/fuzzy.hpp"

namespace tacdss::domain {

/// Factor ranges in raw units.
inline constexpr double kFuelMaxLitres = 1000.0;
inline constexpr double kInterruptMaxMinutes = 60.0;
inline constexpr double kWeaponMaxPercent = 100.0;
inline constexpr double kDangerMaxPoints = 10.0;

/// Input order used everywhere: fuel, time, weapon, danger.
inline constexpr std::array<const char*, 4> kFactorNames{"fuel", "time", "weapon",
                                                         "danger"};
inline constexpr const char* kScoreName = "score";

struct DecisionFactors {
  double fuel_litres = 0.0;
  double interrupt_minutes = 0.0;
  double weapon_percent = 0.0;
  double danger_points = 0.0;
};

struct NormalizedFactors {
  double fuel = 0.0;
  double time = 0.0;
  double weapon = 0.0;
  double danger = 0.0;

  std::array<double, 4> as_array() const { return {fuel, time, weapon, danger}; }
  static NormalizedFactors from_array(const std::array<double, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
  }
};

/// Throws ValidationError naming the offending field.
void validate(const DecisionFactors& f);
void validate(const NormalizedFactors& f);

NormalizedFactors normalize(const DecisionFactors& f);
DecisionFactors denormalize(const NormalizedFactors& n);

/// mean(fuel, 1 - time, weapon, 1 - danger), clamped to [0, 1]. Low fuel,
/// long interrupt time, low weapons and high danger give a small value;
/// the opposite corner gives a high value.
double expert_score(const NormalizedFactors& n);

/// `n` samples with inputs uniform on [0,1]^4 and
/// target = clamp(expert_score + N(0, noise_sigma), 0, 1).
std::vector<TrainingSample> generate_dataset(std::size_t n, double noise_sigma,
                                             std::uint64_t seed);

struct ScenarioPreset {
  std::string name;
  NormalizedFactors factors;
  std::optional<double> recorded_score;  // reported output of the reference model
  std::optional<double> expected_score;  // reported desired output, when given
};

/// bad, good, test, in that order.
std::vector<ScenarioPreset> presets();

/// Conventional labels for a partition of `count` MFs on the named variable.
std::vector<std::string> default_labels(const std::string& variable, std::size_t count);

/// Evenly spaced centers over [0,1], endpoints included.
std::vector<double> uniform_centers(std::size_t count);

/// Four normalized inputs plus the normalized score output, with evenly
/// spaced centers.
SystemSkeleton make_skeleton(const std::array<std::size_t, 4>& input_mfs,
                             std::size_t output_mfs, const InferenceConfig& config);

}  // namespace tacdss::domain
