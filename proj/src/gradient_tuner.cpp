#include "tacdss/gradient_tuner.hpp"

#include <cmath>

#include "tacdss/centers.hpp"
#include "tacdss/error.hpp"

namespace tacdss::gradient {

void GdConfig::validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
    throw ConfigError("learning rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("momentum must lie in [0, 1)");
  }
  if (epochs < 1) throw ConfigError("epochs must be at least 1");
  if (gradient_mode == GradientMode::finite_difference && !(fd_step > 0.0)) {
    throw ConfigError("finite-difference step must be positive");
  }
}

LossReport loss(const FuzzySystem& system, std::span<const TrainingSample> data) {
  if (data.empty()) throw DataError("loss of an empty dataset");
  double sq = 0.0;
  for (const TrainingSample& s : data) {
    const double e = s.target - predict(system, s.inputs);
    sq += e * e;
  }
  LossReport report;
  report.error = 0.5 * sq;
  report.rmse = std::sqrt(sq / static_cast<double>(data.size()));
  return report;
}

std::vector<std::size_t> tunable_indices(const FuzzySystem& system, Tunable tunable) {
  std::size_t input_total = 0;
  for (const auto& v : system.inputs()) input_total += v.size();
  const std::size_t total = input_total + system.output().size();
  const std::size_t begin = tunable == Tunable::output_centers ? input_total : 0;
  const std::size_t end = tunable == Tunable::input_centers ? input_total : total;
  std::vector<std::size_t> idx;
  idx.reserve(end - begin);
  for (std::size_t i = begin; i < end; ++i) idx.push_back(i);
  return idx;
}

namespace {

// dE/dc over the full flat center vector for a center-average, product
// t-norm system:
//   y = sum_r f_r c_o(r) / F,  F = sum_r f_r,  f_r = w_r prod_j mu_j(x_j)
//   dy/dc_out[k] = sum_{r: o(r)=k} f_r / F
//   dy/df_r      = (c_o(r) - y) / F
std::vector<double> analytic_full(const FuzzySystem& system,
                                  std::span<const TrainingSample> data) {
  const auto& inputs = system.inputs();
  const auto& rules = system.rules();
  const auto& out_centers = system.output().centers();
  const bool weighted = system.config().weight_mode == WeightMode::scale_firing;
  const std::size_t n_in = inputs.size();

  std::vector<std::size_t> offsets(n_in + 1, 0);
  for (std::size_t j = 0; j < n_in; ++j) offsets[j + 1] = offsets[j] + inputs[j].size();
  const std::size_t out_offset = offsets[n_in];
  std::vector<double> grad(out_offset + out_centers.size(), 0.0);

  std::vector<double> firing(rules.size());
  std::vector<double> mu(n_in);
  for (const TrainingSample& s : data) {
    const Memberships degrees = fuzzify(system, s.inputs);
    double total = 0.0;
    double weighted_centers = 0.0;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      double f = weighted ? rules[r].weight : 1.0;
      for (std::size_t j = 0; j < n_in; ++j) f *= degrees[j][rules[r].antecedent[j]];
      firing[r] = f;
      total += f;
      weighted_centers += f * out_centers[rules[r].consequent];
    }
    if (total <= 0.0) continue;  // fallback output does not depend on centers
    const double y = weighted_centers / total;
    const double dE_dy = y - s.target;

    for (std::size_t r = 0; r < rules.size(); ++r) {
      const FuzzyRule& rule = rules[r];
      grad[out_offset + rule.consequent] += dE_dy * firing[r] / total;

      const double dy_df = (out_centers[rule.consequent] - y) / total;
      const double w = weighted ? rule.weight : 1.0;
      for (std::size_t j = 0; j < n_in; ++j) mu[j] = degrees[j][rule.antecedent[j]];
      for (std::size_t j = 0; j < n_in; ++j) {
        const std::size_t a = rule.antecedent[j];
        const auto d_mu = partition_degree_gradient(inputs[j].centers(), a, s.inputs[j]);
        if (d_mu[0] == 0.0 && d_mu[1] == 0.0 && d_mu[2] == 0.0) continue;
        double others = w;
        for (std::size_t i = 0; i < n_in; ++i) {
          if (i != j) others *= mu[i];
        }
        if (others == 0.0) continue;
        const double scale = dE_dy * dy_df * others;
        for (int k = 0; k < 3; ++k) {
          if (d_mu[k] == 0.0) continue;
          const std::size_t m = a + static_cast<std::size_t>(k) - 1;
          grad[offsets[j] + m] += scale * d_mu[k];
        }
      }
    }
  }
  return grad;
}

double error_at(const FuzzySystem& system, std::span<const TrainingSample> data,
                std::span<const double> flat) {
  return loss(replace_centers(system, flat), data).error;
}

// Central differences where both neighbours stay valid, one-sided otherwise
// (e.g. a center sitting on the domain edge).
std::vector<double> finite_difference(const FuzzySystem& system,
                                      std::span<const TrainingSample> data,
                                      std::span<const std::size_t> indices,
                                      double h) {
  const std::vector<double> base = flatten_centers(system);
  const double e0 = loss(system, data).error;
  std::vector<double> grad;
  grad.reserve(indices.size());
  for (std::size_t i : indices) {
    std::vector<double> plus = base;
    std::vector<double> minus = base;
    plus[i] += h;
    minus[i] -= h;
    const bool up = centers_valid(system, plus);
    const bool down = centers_valid(system, minus);
    if (up && down) {
      grad.push_back((error_at(system, data, plus) - error_at(system, data, minus)) /
                     (2.0 * h));
    } else if (up) {
      grad.push_back((error_at(system, data, plus) - e0) / h);
    } else if (down) {
      grad.push_back((e0 - error_at(system, data, minus)) / h);
    } else {
      grad.push_back(0.0);
    }
  }
  return grad;
}

}  // namespace

std::vector<double> compute_gradient(const FuzzySystem& system,
                                     std::span<const TrainingSample> data,
                                     const GdConfig& config) {
  if (data.empty()) throw DataError("gradient of an empty dataset");
  const auto indices = tunable_indices(system, config.tunable);
  if (config.gradient_mode == GradientMode::finite_difference) {
    return finite_difference(system, data, indices, config.fd_step);
  }
  if (!system.config().is_differentiable()) {
    throw ConfigError(
        "analytic gradients need the trainable profile (product t-norm, "
        "center-average defuzzifier); use finite-difference mode instead");
  }
  const std::vector<double> full = analytic_full(system, data);
  std::vector<double> grad;
  grad.reserve(indices.size());
  for (std::size_t i : indices) grad.push_back(full[i]);
  return grad;
}

std::pair<FuzzySystem, LossReport> train(const FuzzySystem& system,
                                         std::span<const TrainingSample> data,
                                         const GdConfig& config) {
  config.validate();
  if (data.empty()) throw DataError("cannot train on an empty dataset");
  if (config.gradient_mode == GradientMode::analytic &&
      !system.config().is_differentiable()) {
    throw ConfigError(
        "analytic gradients need the trainable profile; use finite-difference mode");
  }

  const auto indices = tunable_indices(system, config.tunable);
  // Steps follow the per-sample mean of dE/dc so the learning rate does not
  // scale with the dataset size.
  const double step_scale = config.learning_rate / static_cast<double>(data.size());
  FuzzySystem current = system;
  std::vector<double> velocity(indices.size(), 0.0);
  std::vector<TraceRow> trace;
  trace.reserve(static_cast<std::size_t>(config.epochs));

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const std::vector<double> g = compute_gradient(current, data, config);
    std::vector<double> flat = flatten_centers(current);
    for (std::size_t k = 0; k < indices.size(); ++k) {
      if (!std::isfinite(g[k])) {
        throw TrainingError("non-finite gradient at epoch " + std::to_string(epoch) +
                            ", center " + std::to_string(indices[k]));
      }
      velocity[k] = config.momentum * velocity[k] - step_scale * g[k];
      flat[indices[k]] += velocity[k];
    }
    current = apply_centers(current, flat);
    const double r = loss(current, data).rmse;
    if (!std::isfinite(r)) {
      throw TrainingError("non-finite rmse at epoch " + std::to_string(epoch));
    }
    trace.push_back({epoch, r});
  }

  LossReport report = loss(current, data);
  report.per_epoch = std::move(trace);
  return {std::move(current), std::move(report)};
}

}  // namespace tacdss::gradient
