#pragma once

// Genetic algorithm over binary inclusion masks of the pattern vocabulary.

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "innov/pattern.hpp"
#include "innov/rng.hpp"
#include "innov/sources.hpp"

namespace innov {

/// Gene i set means pattern term i is part of the query.
class Genotype {
 public:
  explicit Genotype(std::vector<std::uint8_t> genes);
  /// Parses "0110".
  static Genotype parse(std::string_view bits);

  std::size_t size() const noexcept { return genes_.size(); }
  bool operator[](std::size_t i) const { return genes_[i] != 0; }
  void set(std::size_t i, bool on) { genes_.at(i) = on ? 1 : 0; }
  void flip(std::size_t i) { genes_.at(i) ^= 1; }
  std::size_t cardinality() const noexcept;
  bool empty_mask() const noexcept { return cardinality() == 0; }
  const std::vector<std::uint8_t>& genes() const noexcept { return genes_; }
  std::string to_string() const;

  /// Lexicographic over the gene sequence, 0 before 1.
  auto operator<=>(const Genotype&) const = default;

 private:
  std::vector<std::uint8_t> genes_;
};

/// Sets one uniformly chosen gene when the mask is empty.
void repair(Genotype& g, Rng& rng);

Query decode(const Genotype& g, const SearchPattern& pattern);

struct GAConfig {
  std::size_t population_size = 30;
  std::size_t generations = 40;
  double crossover_rate = 0.9;
  std::optional<double> mutation_rate;  // per gene; default 1/|V|
  std::size_t elitism = 2;
  std::size_t tournament_size = 3;
  std::size_t top_m = 10;
  std::size_t top_documents = 20;  // documents scored per fitness evaluation
  std::size_t stagnation_limit = 10;
  std::uint64_t rng_seed = 1;
  bool parallel = true;

  double effective_mutation_rate(std::size_t vocabulary) const {
    return mutation_rate.value_or(1.0 / static_cast<double>(vocabulary));
  }
};

/// Throws InvalidConfig.
void validate(const GAConfig& cfg);

std::vector<Genotype> init_population(const SearchPattern& pattern, const GAConfig& cfg, Rng& rng);

/// Mean cosine between the pattern's weight vector and the weighted
/// term-frequency vectors (marker + terms) of the first n_top documents the
/// decoded query retrieves. 0 when nothing matches.
double fitness(const Genotype& g, const SearchPattern& pattern, const SourceAdapter& source, std::size_t n_top);

/// Single-point crossover with a uniform cut in [1, |V|-1].
std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, Rng& rng);
/// Crossover at a given cut; rng is only used to repair empty children.
std::pair<Genotype, Genotype> crossover_at(const Genotype& a, const Genotype& b, std::size_t cut, Rng& rng);

Genotype mutate(const Genotype& g, double rate, Rng& rng);

struct GenerationStats {
  std::size_t generation = 0;
  double best = 0.0;
  double mean = 0.0;
};

struct EffectiveQuery {
  Genotype mask;
  Query query;
  double fitness = 0.0;
  std::size_t multiplicity = 0;  // appearances across all generations
};

struct EvolutionReport {
  std::vector<EffectiveQuery> best_queries;
  std::vector<GenerationStats> generations;
  std::size_t evaluations = 0;  // distinct masks sent to the source
  bool stopped_early = false;
};

EvolutionReport evolve(const SearchPattern& pattern, const SourceAdapter& source, const GAConfig& cfg);

struct ExhaustiveResult {
  Genotype mask;
  Query query;
  double fitness = 0.0;
};

inline constexpr std::size_t kExhaustiveLimit = 16;

/// Best of all 2^|V|-1 non-empty masks; ties go to the smaller cardinality,
/// then the lexicographically smaller mask.
ExhaustiveResult exhaustive_best(const SearchPattern& pattern, const SourceAdapter& source, std::size_t n_top);

/// Ranking used by elitism, the effective-query list and exhaustive_best:
/// higher fitness, then fewer genes, then lexicographic mask order.
bool ranks_before(double fa, const Genotype& a, double fb, const Genotype& b);

}  // namespace innov
