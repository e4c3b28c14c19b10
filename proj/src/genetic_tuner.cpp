#include "tacdss/genetic_tuner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tacdss/centers.hpp"
#include "tacdss/error.hpp"

namespace tacdss::genetic {

void GaConfig::validate() const {
  if (population_size == 0) throw ConfigError("population size must be positive");
  if (generations < 0) throw ConfigError("generations must be non-negative");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) {
    throw ConfigError("mutation rate must lie in [0, 1]");
  }
  if (!(mutation_sigma >= 0.0) || !std::isfinite(mutation_sigma)) {
    throw ConfigError("mutation sigma must be non-negative");
  }
  if (tournament_size < 2) throw ConfigError("tournament size must be at least 2");
  if (elitism >= population_size) {
    throw ConfigError("elitism must be smaller than the population size");
  }
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
    throw ConfigError("crossover rate must lie in [0, 1]");
  }
}

Chromosome encode(const FuzzySystem& system) { return {flatten_centers(system)}; }

FuzzySystem decode(const Chromosome& chromosome, const FuzzySystem& skeleton) {
  return apply_centers(skeleton, chromosome.genes);
}

std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& a,
                                                      const Chromosome& b,
                                                      std::size_t cut) {
  if (a.size() != b.size()) throw DataError("crossover parents differ in length");
  if (cut == 0 || cut >= a.size()) {
    throw DataError("crossover cut must satisfy 0 < cut < " + std::to_string(a.size()));
  }
  const auto at = [cut](const Chromosome& c) {
    return c.genes.begin() + static_cast<std::ptrdiff_t>(cut);
  };
  Chromosome c1;
  Chromosome c2;
  c1.genes.reserve(a.size());
  c2.genes.reserve(a.size());
  c1.genes.insert(c1.genes.end(), a.genes.begin(), at(a));
  c1.genes.insert(c1.genes.end(), at(b), b.genes.end());
  c2.genes.insert(c2.genes.end(), b.genes.begin(), at(b));
  c2.genes.insert(c2.genes.end(), at(a), a.genes.end());
  return {std::move(c1), std::move(c2)};
}

Chromosome mutate(const Chromosome& c, const GaConfig& config, Rng& rng,
                  std::span<const double> gene_scales) {
  if (!gene_scales.empty() && gene_scales.size() != c.size()) {
    throw DataError("gene scale count differs from chromosome length");
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Chromosome out = c;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (coin(rng) < config.mutation_rate) {
      const double scale = gene_scales.empty() ? 1.0 : gene_scales[i];
      out.genes[i] += config.mutation_sigma * scale * gauss(rng);
    }
  }
  return out;
}

std::size_t tournament_select(std::span<const double> fitnesses,
                              const GaConfig& config, Rng& rng) {
  if (fitnesses.empty()) throw DataError("tournament over an empty population");
  std::uniform_int_distribution<std::size_t> pick(0, fitnesses.size() - 1);
  std::size_t best = pick(rng);
  for (std::size_t k = 1; k < config.tournament_size; ++k) {
    const std::size_t challenger = pick(rng);
    if (fitnesses[challenger] < fitnesses[best]) best = challenger;
  }
  return best;
}

namespace {

struct Layout {
  std::vector<CenterSlice> slices;
  std::vector<double> gene_scales;
};

Layout make_layout(const FuzzySystem& skeleton) {
  Layout l{center_layout(skeleton), {}};
  for (const CenterSlice& s : l.slices) {
    l.gene_scales.insert(l.gene_scales.end(), s.count, s.domain_max - s.domain_min);
  }
  return l;
}

Chromosome repair(Chromosome c, const Layout& layout) {
  for (const CenterSlice& s : layout.slices) {
    auto slice = std::span<const double>(c.genes).subspan(s.offset, s.count);
    const auto fixed = repair_centers(slice, s.domain_min, s.domain_max);
    std::copy(fixed.begin(), fixed.end(),
              c.genes.begin() + static_cast<std::ptrdiff_t>(s.offset));
  }
  return c;
}

Chromosome random_individual(const Layout& layout, Rng& rng) {
  Chromosome c;
  for (const CenterSlice& s : layout.slices) {
    std::uniform_real_distribution<double> u(s.domain_min, s.domain_max);
    for (std::size_t i = 0; i < s.count; ++i) c.genes.push_back(u(rng));
  }
  return repair(std::move(c), layout);
}

double fitness(const Chromosome& c, const FuzzySystem& skeleton,
               std::span<const TrainingSample> data) {
  const double r = rmse(decode(c, skeleton), data);
  if (!std::isfinite(r)) throw TrainingError("non-finite fitness during evolution");
  return r;
}

}  // namespace

EvolutionResult evolve(const FuzzySystem& skeleton,
                       std::span<const TrainingSample> data, const GaConfig& config) {
  config.validate();
  if (data.empty()) throw DataError("cannot evolve on an empty dataset");

  const Layout layout = make_layout(skeleton);
  const std::size_t length = layout.gene_scales.size();
  Rng rng(config.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> cut_pick(1, length > 1 ? length - 1 : 1);

  std::vector<Chromosome> population;
  population.reserve(config.population_size);
  population.push_back(repair(encode(skeleton), layout));
  while (population.size() < config.population_size) {
    population.push_back(random_individual(layout, rng));
  }
  std::vector<double> fit(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    fit[i] = fitness(population[i], skeleton, data);
  }

  auto best_of = [](const std::vector<double>& f) {
    return static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
  };
  std::size_t best_index = best_of(fit);
  Chromosome best = population[best_index];
  double best_rmse = fit[best_index];
  const double initial_best = best_rmse;

  std::vector<gradient::TraceRow> trace;
  trace.reserve(static_cast<std::size_t>(config.generations));

  std::vector<std::size_t> order(population.size());
  for (int gen = 1; gen <= config.generations; ++gen) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });

    std::vector<Chromosome> next;
    std::vector<double> next_fit;
    next.reserve(config.population_size);
    next_fit.reserve(config.population_size);
    for (std::size_t e = 0; e < config.elitism; ++e) {
      next.push_back(population[order[e]]);
      next_fit.push_back(fit[order[e]]);
    }

    while (next.size() < config.population_size) {
      const Chromosome& p1 = population[tournament_select(fit, config, rng)];
      const Chromosome& p2 = population[tournament_select(fit, config, rng)];
      Chromosome c1 = p1;
      Chromosome c2 = p2;
      if (length > 1 && coin(rng) < config.crossover_rate) {
        std::tie(c1, c2) = one_point_crossover(p1, p2, cut_pick(rng));
      }
      for (Chromosome* child : {&c1, &c2}) {
        if (next.size() == config.population_size) break;
        Chromosome fixed = repair(mutate(*child, config, rng, layout.gene_scales), layout);
        next_fit.push_back(fitness(fixed, skeleton, data));
        next.push_back(std::move(fixed));
      }
    }

    population = std::move(next);
    fit = std::move(next_fit);
    best_index = best_of(fit);
    if (fit[best_index] < best_rmse) {
      best_rmse = fit[best_index];
      best = population[best_index];
    }
    trace.push_back({gen, best_rmse});
  }

  return {decode(best, skeleton), best, best_rmse, initial_best, std::move(trace)};
}

}  // namespace tacdss::genetic
