#pragma once

// Gradient descent with momentum over MF centers, minimising
// E = 1/2 * sum over samples of (target - output)^2.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "tacdss/fuzzy.hpp"

namespace tacdss::gradient {

enum class Tunable { input_centers, output_centers, both };
enum class GradientMode { analytic, finite_difference };

struct GdConfig {
  double learning_rate = 0.1;
  double momentum = 0.8;
  int epochs = 10;
  Tunable tunable = Tunable::both;
  GradientMode gradient_mode = GradientMode::analytic;
  double fd_step = 1e-6;

  void validate() const;
};

struct TraceRow {
  int step;
  double rmse;
};

struct LossReport {
  double error = 0.0;  // E
  double rmse = 0.0;
  std::vector<TraceRow> per_epoch;
};

/// E and rmse over `data`. Throws DataError on an empty dataset.
LossReport loss(const FuzzySystem& system, std::span<const TrainingSample> data);

/// Indices into flatten_centers(system) covered by `tunable`, in layout order.
std::vector<std::size_t> tunable_indices(const FuzzySystem& system, Tunable tunable);

/// dE/dcenter for every tunable center, in chromosome order. Analytic mode
/// requires a differentiable inference profile (ConfigError otherwise).
std::vector<double> compute_gradient(const FuzzySystem& system,
                                     std::span<const TrainingSample> data,
                                     const GdConfig& config);

/// Full-batch descent with momentum and post-step center repair. The
/// returned report's per_epoch holds one rmse row per epoch.
std::pair<FuzzySystem, LossReport> train(const FuzzySystem& system,
                                         std::span<const TrainingSample> data,
                                         const GdConfig& config);

}  // namespace tacdss::gradient
