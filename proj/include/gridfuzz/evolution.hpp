#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gridfuzz/codec.hpp"
#include "gridfuzz/rng.hpp"

namespace gridfuzz {

struct EvolutionConfig {
  int population_size = 40;
  int generations = 100;
  double crossover_fraction = 0.8;
  double mutation_rate = 0.01;   // per-gene probability
  double decay_exponent = 1.0;   // non-uniform mutation decay speed
  int elite_count = 2;
  std::uint64_t master_seed = 0;
  int threads = 1;  // fitness evaluation parallelism; results are identical for any value

  void validate() const;  // throws EvolutionError
};

struct GenerationStats {
  double best_fitness = 0.0;
  double mean_fitness = 0.0;
  Chromosome best;
};

struct RunHistory {
  std::vector<GenerationStats> generations;  // exactly config.generations rows
  Chromosome final_best;
  double final_best_fitness = 0.0;
};

/// Fitness stakes are laid on a line and picked at one random phase plus
/// equal strides, so the copy count of an individual matches its share of
/// the total stake. Fitness values are lifted to be non-negative first
/// (only when negatives are present); an all-zero stake falls back to
/// uniform random picks.
std::vector<std::size_t> stochastic_uniform_selection(std::span<const double> fitnesses,
                                                      std::size_t n_picks, std::uint64_t seed);

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> one_point_crossover_binary(
    const std::vector<std::uint8_t>& p1, const std::vector<std::uint8_t>& p2, std::uint64_t seed);

std::pair<std::vector<double>, std::vector<double>> convex_crossover_real(
    const std::vector<double>& p1, const std::vector<double>& p2, std::uint64_t seed);

/// Deterministic core of the non-uniform mutation: displace the gene
/// towards the chosen bound by b * (1 - g/G)^a of the remaining headroom.
double non_uniform_displace(double gene, double lower, double upper, int g, int generations,
                            double decay_exponent, double b, bool upward);

/// Stochastic form: b uniform in [0,1], branch a fair coin.
double non_uniform_mutation(double gene, double lower, double upper, int g, int generations,
                            double decay_exponent, std::uint64_t seed);

std::vector<std::uint8_t> binary_point_mutation(const std::vector<std::uint8_t>& vec, double rho,
                                                std::uint64_t seed);

/// Mixed operators over a whole chromosome (used by the engine, exposed for
/// the operator test suites).
std::pair<Chromosome, Chromosome> crossover_mixed(const Chromosome& p1, const Chromosome& p2,
                                                  Rng& rng);
Chromosome mutate_mixed(Chromosome c, const GeneBounds& bounds, double rho, int g, int generations,
                        double decay_exponent, Rng& rng);

using FitnessFn = std::function<double(const Chromosome&)>;

/// Generational GA: evaluate, carry elites, select parents by stochastic
/// uniform sampling, fill a crossover_fraction share of the offspring slots
/// with crossover children and the rest with mutated parent copies.
/// Histories are bit-identical for a given master seed regardless of the
/// thread count (per-slot seed derivation; fitness must be pure).
RunHistory evolve(const EvolutionConfig& config, Scheme scheme, const GeneBounds& bounds,
                  const FitnessFn& fitness);

}  // namespace gridfuzz
