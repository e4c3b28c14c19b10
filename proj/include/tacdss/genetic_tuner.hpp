#pragma once

// Real-coded genetic algorithm over the flat MF-center chromosome.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "tacdss/fuzzy.hpp"
#include "tacdss/gradient_tuner.hpp"

namespace tacdss::genetic {

using Rng = std::mt19937_64;

/// Input centers variable by variable, then output centers.
struct Chromosome {
  std::vector<double> genes;

  std::size_t size() const noexcept { return genes.size(); }
  friend bool operator==(const Chromosome&, const Chromosome&) = default;
};

struct GaConfig {
  std::size_t population_size = 50;
  int generations = 50;
  double mutation_rate = 0.01;   // per gene
  double mutation_sigma = 0.1;   // fraction of the gene's domain width
  std::size_t tournament_size = 2;
  std::size_t elitism = 1;
  double crossover_rate = 0.9;
  std::uint64_t seed = 7;

  void validate() const;
};

Chromosome encode(const FuzzySystem& system);

/// Rebuilds `skeleton` with the chromosome's centers; each variable's slice
/// is clamped, sorted and gap-separated first. Throws DataError on a length
/// mismatch.
FuzzySystem decode(const Chromosome& chromosome, const FuzzySystem& skeleton);

/// child1 = a[..cut] + b[cut..], child2 = b[..cut] + a[cut..].
std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& a,
                                                      const Chromosome& b,
                                                      std::size_t cut);

/// Adds N(0, (mutation_sigma * scale[i])^2) to gene i with probability
/// mutation_rate. `gene_scales` is empty (unit scale) or one entry per gene.
Chromosome mutate(const Chromosome& c, const GaConfig& config, Rng& rng,
                  std::span<const double> gene_scales = {});

/// Draws tournament_size indices uniformly with replacement and returns the
/// one with the lowest fitness (RMSE); ties go to the earliest draw.
std::size_t tournament_select(std::span<const double> fitnesses,
                              const GaConfig& config, Rng& rng);

struct EvolutionResult {
  FuzzySystem best;
  Chromosome best_chromosome;
  double best_rmse;
  double initial_best_rmse;
  std::vector<gradient::TraceRow> per_generation;  // best-so-far rmse
};

/// Generational GA seeded with the skeleton's own centers as individual 0.
EvolutionResult evolve(const FuzzySystem& skeleton,
                       std::span<const TrainingSample> data, const GaConfig& config);

}  // namespace tacdss::genetic
