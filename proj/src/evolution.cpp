#include "gridfuzz/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "gridfuzz/errors.hpp"

namespace gridfuzz {

namespace {

// seed-stream tags
constexpr std::uint64_t kStreamInit = 0x101;
constexpr std::uint64_t kStreamSelect = 0x202;
constexpr std::uint64_t kStreamShuffle = 0x303;
constexpr std::uint64_t kStreamCross = 0x404;
constexpr std::uint64_t kStreamMutate = 0x505;

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

void EvolutionConfig::validate() const {
  if (population_size < 2) throw EvolutionError("population_size must be at least 2");
  if (generations < 1) throw EvolutionError("generations must be at least 1");
  if (!(crossover_fraction >= 0.0 && crossover_fraction <= 1.0))
    throw EvolutionError("crossover_fraction must lie in [0,1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
    throw EvolutionError("mutation_rate must lie in [0,1]");
  if (!(decay_exponent > 0.0)) throw EvolutionError("decay_exponent must be positive");
  if (elite_count < 0 || elite_count >= population_size)
    throw EvolutionError("elite_count must lie in [0, population_size)");
}

std::vector<std::size_t> stochastic_uniform_selection(std::span<const double> fitnesses,
                                                      std::size_t n_picks, std::uint64_t seed) {
  if (fitnesses.empty() || n_picks == 0) throw EvolutionError("selection needs individuals and picks");
  for (const double f : fitnesses)
    if (!std::isfinite(f)) throw EvolutionError("selection over non-finite fitness");

  const double min_f = *std::min_element(fitnesses.begin(), fitnesses.end());
  const double lift = min_f < 0.0 ? -min_f : 0.0;
  double total = 0.0;
  for (const double f : fitnesses) total += f + lift;

  Rng rng(seed);
  std::vector<std::size_t> picks;
  picks.reserve(n_picks);
  if (!(total > 0.0)) {
    // all stakes zero: no signal to follow
    for (std::size_t i = 0; i < n_picks; ++i)
      picks.push_back(static_cast<std::size_t>(rng.index(fitnesses.size())));
    return picks;
  }

  const double stride = total / static_cast<double>(n_picks);
  double pointer = rng.uniform() * stride;
  double cum = 0.0;
  std::size_t i = 0;
  while (picks.size() < n_picks && i < fitnesses.size()) {
    cum += fitnesses[i] + lift;
    while (picks.size() < n_picks && pointer < cum) {
      picks.push_back(i);
      pointer += stride;
    }
    ++i;
  }
  while (picks.size() < n_picks) picks.push_back(fitnesses.size() - 1);  // fp guard
  return picks;
}

std::pair<std::vector<std::uint8_t>, std::vector<std::uint8_t>> one_point_crossover_binary(
    const std::vector<std::uint8_t>& p1, const std::vector<std::uint8_t>& p2, std::uint64_t seed) {
  if (p1.size() != p2.size()) throw OperatorError("binary crossover length mismatch");
  Rng rng(seed);
  auto out = std::make_pair(p1, p2);
  if (p1.size() < 2) return out;
  const std::size_t cut = 1 + static_cast<std::size_t>(rng.index(p1.size() - 1));
  for (std::size_t i = cut; i < p1.size(); ++i) std::swap(out.first[i], out.second[i]);
  return out;
}

std::pair<std::vector<double>, std::vector<double>> convex_crossover_real(
    const std::vector<double>& p1, const std::vector<double>& p2, std::uint64_t seed) {
  if (p1.size() != p2.size()) throw OperatorError("convex crossover length mismatch");
  Rng rng(seed);
  const double lambda = rng.uniform();
  std::vector<double> c1(p1.size()), c2(p1.size());
  for (std::size_t i = 0; i < p1.size(); ++i) {
    c1[i] = lambda * p1[i] + (1.0 - lambda) * p2[i];
    c2[i] = lambda * p2[i] + (1.0 - lambda) * p1[i];
    // the combination cannot leave [min,max] except by rounding
    const double lo = std::min(p1[i], p2[i]);
    const double hi = std::max(p1[i], p2[i]);
    c1[i] = std::clamp(c1[i], lo, hi);
    c2[i] = std::clamp(c2[i], lo, hi);
  }
  return {c1, c2};
}

double non_uniform_displace(double gene, double lower, double upper, int g, int generations,
                            double decay_exponent, double b, bool upward) {
  if (!(gene >= lower && gene <= upper)) throw OperatorError("gene outside its bounds");
  const double decay = std::pow(1.0 - static_cast<double>(g) / static_cast<double>(generations),
                                decay_exponent);
  const double moved = upward ? gene + (upper - gene) * b * decay : gene - (gene - lower) * b * decay;
  return std::clamp(moved, lower, upper);
}

double non_uniform_mutation(double gene, double lower, double upper, int g, int generations,
                            double decay_exponent, std::uint64_t seed) {
  Rng rng(seed);
  const double b = rng.uniform();
  const bool upward = rng.coin();
  return non_uniform_displace(gene, lower, upper, g, generations, decay_exponent, b, upward);
}

std::vector<std::uint8_t> binary_point_mutation(const std::vector<std::uint8_t>& vec, double rho,
                                                std::uint64_t seed) {
  Rng rng(seed);
  auto out = vec;
  for (auto& gene : out)
    if (rng.uniform() < rho) gene ^= 1;
  return out;
}

std::pair<Chromosome, Chromosome> crossover_mixed(const Chromosome& p1, const Chromosome& p2,
                                                  Rng& rng) {
  if (p1.control.size() != p2.control.size() || p1.parametric.size() != p2.parametric.size())
    throw OperatorError("crossover parents have mismatched geometry");
  Chromosome c1, c2;
  c1.control = p1.control;
  c2.control = p2.control;
  if (p1.control.size() >= 2) {
    const std::size_t cut = 1 + static_cast<std::size_t>(rng.index(p1.control.size() - 1));
    for (std::size_t i = cut; i < p1.control.size(); ++i) std::swap(c1.control[i], c2.control[i]);
  }
  const double lambda = rng.uniform();
  c1.parametric.resize(p1.parametric.size());
  c2.parametric.resize(p1.parametric.size());
  for (std::size_t i = 0; i < p1.parametric.size(); ++i) {
    const double a = p1.parametric[i];
    const double b = p2.parametric[i];
    const double lo = std::min(a, b);
    const double hi = std::max(a, b);
    c1.parametric[i] = std::clamp(lambda * a + (1.0 - lambda) * b, lo, hi);
    c2.parametric[i] = std::clamp(lambda * b + (1.0 - lambda) * a, lo, hi);
  }
  return {c1, c2};
}

Chromosome mutate_mixed(Chromosome c, const GeneBounds& bounds, double rho, int g, int generations,
                        double decay_exponent, Rng& rng) {
  for (auto& gene : c.control)
    if (rng.uniform() < rho) gene ^= 1;
  if (c.parametric.size() != bounds.size()) throw OperatorError("bounds do not match chromosome");
  for (std::size_t i = 0; i < c.parametric.size(); ++i) {
    if (rng.uniform() < rho) {
      const double b = rng.uniform();
      const bool upward = rng.coin();
      c.parametric[i] = non_uniform_displace(c.parametric[i], bounds.lower[i], bounds.upper[i], g,
                                             generations, decay_exponent, b, upward);
    }
  }
  return c;
}

RunHistory evolve(const EvolutionConfig& config, Scheme scheme, const GeneBounds& bounds,
                  const FitnessFn& fitness) {
  config.validate();
  const auto pop_size = static_cast<std::size_t>(config.population_size);

  std::vector<Chromosome> population(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i)
    population[i] = random_chromosome(scheme, bounds, derive_seed(config.master_seed, kStreamInit, 0, i));

  std::vector<double> scores(pop_size);
  const auto evaluate = [&](int generation) {
    parallel_for(pop_size, config.threads,
                 [&](std::size_t i) { scores[i] = fitness(population[i]); });
    for (std::size_t i = 0; i < pop_size; ++i) {
      if (!std::isfinite(scores[i])) {
        std::ostringstream os;
        os << "non-finite fitness at generation " << generation << ", slot " << i << ": "
           << chromosome_to_line(population[i]);
        throw EvolutionError(os.str());
      }
    }
  };
  evaluate(0);

  const auto ranked = [&] {
    std::vector<std::size_t> order(pop_size);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    return order;
  };

  RunHistory history;
  history.generations.reserve(static_cast<std::size_t>(config.generations));

  for (int g = 1; g <= config.generations; ++g) {
    const auto order = ranked();
    std::vector<Chromosome> next;
    next.reserve(pop_size);
    for (int e = 0; e < config.elite_count; ++e)
      next.push_back(population[order[static_cast<std::size_t>(e)]]);

    const std::size_t n_offspring = pop_size - static_cast<std::size_t>(config.elite_count);
    const auto n_cross = static_cast<std::size_t>(
        std::lround(config.crossover_fraction * static_cast<double>(n_offspring)));
    const std::size_t n_pairs = (n_cross + 1) / 2;
    const std::size_t n_mut = n_offspring - n_cross;

    auto parents = stochastic_uniform_selection(scores, 2 * n_pairs + n_mut,
                                                derive_seed(config.master_seed, kStreamSelect,
                                                            static_cast<std::uint64_t>(g)));
    {
      // decouple mating pairs from the line order of the picks
      Rng shuffle_rng(derive_seed(config.master_seed, kStreamShuffle, static_cast<std::uint64_t>(g)));
      for (std::size_t i = parents.size(); i > 1; --i)
        std::swap(parents[i - 1], parents[static_cast<std::size_t>(shuffle_rng.index(i))]);
    }

    for (std::size_t p = 0; p < n_pairs; ++p) {
      Rng rng(derive_seed(config.master_seed, kStreamCross, static_cast<std::uint64_t>(g), p));
      auto kids = crossover_mixed(population[parents[2 * p]], population[parents[2 * p + 1]], rng);
      next.push_back(std::move(kids.first));
      if (next.size() < static_cast<std::size_t>(config.elite_count) + n_cross)
        next.push_back(std::move(kids.second));
    }
    for (std::size_t m = 0; m < n_mut; ++m) {
      const std::size_t slot = next.size();
      Rng rng(derive_seed(config.master_seed, kStreamMutate, static_cast<std::uint64_t>(g), slot));
      next.push_back(mutate_mixed(population[parents[2 * n_pairs + m]], bounds, config.mutation_rate,
                                  g, config.generations, config.decay_exponent, rng));
    }

    population = std::move(next);
    evaluate(g);

    GenerationStats stats;
    const auto new_order = ranked();
    stats.best_fitness = scores[new_order[0]];
    stats.mean_fitness = std::accumulate(scores.begin(), scores.end(), 0.0) /
                         static_cast<double>(pop_size);
    stats.best = population[new_order[0]];
    history.generations.push_back(std::move(stats));
  }

  history.final_best = history.generations.back().best;
  history.final_best_fitness = history.generations.back().best_fitness;
  return history;
}

}  // namespace gridfuzz
