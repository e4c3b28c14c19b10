#include "tacdss/domain.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "tacdss/error.hpp"

namespace tacdss::domain {

namespace {

void check_range(const char* field, double v, double hi) {
  if (!(v >= 0.0 && v <= hi)) {
    std::ostringstream msg;
    msg << field << " must lie in [0, " << hi << "], got " << v;
    throw ValidationError(msg.str());
  }
}

}  // namespace

void validate(const DecisionFactors& f) {
  check_range("fuel", f.fuel_litres, kFuelMaxLitres);
  check_range("time", f.interrupt_minutes, kInterruptMaxMinutes);
  check_range("weapon", f.weapon_percent, kWeaponMaxPercent);
  check_range("danger", f.danger_points, kDangerMaxPoints);
}

void validate(const NormalizedFactors& f) {
  check_range("fuel", f.fuel, 1.0);
  check_range("time", f.time, 1.0);
  check_range("weapon", f.weapon, 1.0);
  check_range("danger", f.danger, 1.0);
}

NormalizedFactors normalize(const DecisionFactors& f) {
  validate(f);
  return {f.fuel_litres / kFuelMaxLitres, f.interrupt_minutes / kInterruptMaxMinutes,
          f.weapon_percent / kWeaponMaxPercent, f.danger_points / kDangerMaxPoints};
}

DecisionFactors denormalize(const NormalizedFactors& n) {
  validate(n);
  return {n.fuel * kFuelMaxLitres, n.time * kInterruptMaxMinutes,
          n.weapon * kWeaponMaxPercent, n.danger * kDangerMaxPoints};
}

double expert_score(const NormalizedFactors& n) {
  const double s = (n.fuel + (1.0 - n.time) + n.weapon + (1.0 - n.danger)) / 4.0;
  return std::clamp(s, 0.0, 1.0);
}

std::vector<TrainingSample> generate_dataset(std::size_t n, double noise_sigma,
                                             std::uint64_t seed) {
  if (n == 0) throw DataError("dataset size must be at least 1");
  if (!(noise_sigma >= 0.0)) throw DataError("noise sigma must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<TrainingSample> data;
  data.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    NormalizedFactors f;
    f.fuel = unit(rng);
    f.time = unit(rng);
    f.weapon = unit(rng);
    f.danger = unit(rng);
    const double noise = noise_sigma * gauss(rng);
    const auto a = f.as_array();
    data.push_back({{a.begin(), a.end()},
                    std::clamp(expert_score(f) + noise, 0.0, 1.0)});
  }
  return data;
}

std::vector<ScenarioPreset> presets() {
  return {
      {"bad", {0.05, 0.95, 0.05, 0.95}, 0.416, std::nullopt},
      {"good", {0.95, 0.05, 0.95, 0.05}, 0.503, std::nullopt},
      {"test", {0.938, 0.05167, 0.975, 0.124}, 0.498, 0.939},
  };
}

std::vector<std::string> default_labels(const std::string& variable, std::size_t count) {
  if (count == 3) {
    if (variable == "fuel") return {"low", "half", "full"};
    if (variable == "time") return {"fast", "normal", "slow"};
    return {"low", "medium", "high"};
  }
  if (count == 5 && variable == kScoreName) {
    return {"very-low", "low", "acceptable", "good", "very-good"};
  }
  if (count == 2) return {"low", "high"};
  if (count == 5) return {"very-low", "low", "medium", "high", "very-high"};
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < count; ++i) labels.push_back("level" + std::to_string(i));
  return labels;
}

std::vector<double> uniform_centers(std::size_t count) {
  if (count < 2) throw ValidationError("a partition needs at least 2 MFs");
  std::vector<double> c(count);
  for (std::size_t i = 0; i < count; ++i) {
    c[i] = static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return c;
}

SystemSkeleton make_skeleton(const std::array<std::size_t, 4>& input_mfs,
                             std::size_t output_mfs, const InferenceConfig& config) {
  std::vector<LinguisticVariable> inputs;
  for (std::size_t j = 0; j < 4; ++j) {
    const std::string name = kFactorNames[j];
    inputs.emplace_back(name, 0.0, 1.0, uniform_centers(input_mfs[j]),
                        default_labels(name, input_mfs[j]));
  }
  LinguisticVariable output(kScoreName, 0.0, 1.0, uniform_centers(output_mfs),
                            default_labels(kScoreName, output_mfs));
  config.validate();
  return {std::move(inputs), std::move(output), config};
}

}  // namespace tacdss::domain
