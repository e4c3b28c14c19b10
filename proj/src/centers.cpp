#include "tacdss/centers.hpp"

#include <algorithm>
#include <cmath>

#include "tacdss/error.hpp"

namespace tacdss {

std::vector<CenterSlice> center_layout(const FuzzySystem& system) {
  std::vector<CenterSlice> layout;
  layout.reserve(system.input_count() + 1);
  std::size_t offset = 0;
  for (const LinguisticVariable& v : system.inputs()) {
    layout.push_back({offset, v.size(), v.domain_min(), v.domain_max()});
    offset += v.size();
  }
  const LinguisticVariable& out = system.output();
  layout.push_back({offset, out.size(), out.domain_min(), out.domain_max()});
  return layout;
}

std::vector<double> flatten_centers(const FuzzySystem& system) {
  std::vector<double> flat;
  for (const LinguisticVariable& v : system.inputs()) {
    flat.insert(flat.end(), v.centers().begin(), v.centers().end());
  }
  const auto& out = system.output().centers();
  flat.insert(flat.end(), out.begin(), out.end());
  return flat;
}

double min_center_gap(double domain_min, double domain_max) noexcept {
  return 1e-4 * (domain_max - domain_min);
}

std::vector<double> repair_centers(std::span<const double> centers,
                                   double domain_min, double domain_max) {
  std::vector<double> c(centers.begin(), centers.end());
  if (c.empty()) return c;
  for (double& v : c) {
    v = std::isnan(v) ? domain_min : std::clamp(v, domain_min, domain_max);
  }
  std::sort(c.begin(), c.end());
  const double gap = min_center_gap(domain_min, domain_max);
  for (std::size_t i = 1; i < c.size(); ++i) {
    c[i] = std::max(c[i], c[i - 1] + gap);
  }
  if (c.back() > domain_max) {
    c.back() = domain_max;
    for (std::size_t i = c.size() - 1; i-- > 0;) {
      c[i] = std::min(c[i], c[i + 1] - gap);
    }
  }
  return c;
}

bool centers_valid(const FuzzySystem& system, std::span<const double> flat) {
  const auto layout = center_layout(system);
  if (flat.size() != layout.back().offset + layout.back().count) return false;
  for (const CenterSlice& s : layout) {
    for (std::size_t i = 0; i < s.count; ++i) {
      const double v = flat[s.offset + i];
      if (!std::isfinite(v) || v < s.domain_min || v > s.domain_max) return false;
      if (i > 0 && !(flat[s.offset + i - 1] < v)) return false;
    }
  }
  return true;
}

namespace {

FuzzySystem rebuild(const FuzzySystem& system, std::span<const double> flat,
                    bool repair) {
  const auto layout = center_layout(system);
  const std::size_t expected = layout.back().offset + layout.back().count;
  if (flat.size() != expected) {
    throw DataError("center vector has " + std::to_string(flat.size()) +
                    " entries, system needs " + std::to_string(expected));
  }
  auto slice_of = [&](const CenterSlice& s) {
    auto part = flat.subspan(s.offset, s.count);
    return repair ? repair_centers(part, s.domain_min, s.domain_max)
                  : std::vector<double>(part.begin(), part.end());
  };
  std::vector<LinguisticVariable> inputs;
  inputs.reserve(system.input_count());
  for (std::size_t j = 0; j < system.input_count(); ++j) {
    inputs.push_back(system.inputs()[j].with_centers(slice_of(layout[j])));
  }
  LinguisticVariable output = system.output().with_centers(slice_of(layout.back()));
  return system.with_variables(std::move(inputs), std::move(output));
}

}  // namespace

FuzzySystem apply_centers(const FuzzySystem& system, std::span<const double> flat) {
  return rebuild(system, flat, true);
}

FuzzySystem replace_centers(const FuzzySystem& system, std::span<const double> flat) {
  return rebuild(system, flat, false);
}

}  // namespace tacdss
