#include "innov/genome.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "innov/errors.hpp"
#include "innov/kernels.hpp"
#include "innov/text.hpp"

namespace innov {

Genotype::Genotype(std::vector<std::uint8_t> genes) : genes_(std::move(genes)) {
  for (auto& g : genes_) g = g ? 1 : 0;
}

Genotype Genotype::parse(std::string_view bits) {
  std::vector<std::uint8_t> genes;
  genes.reserve(bits.size());
  for (char c : bits) {
    if (c != '0' && c != '1') throw Error(ErrorCode::ParseError, "bad mask '" + std::string(bits) + "'");
    genes.push_back(c == '1');
  }
  return Genotype(std::move(genes));
}

std::size_t Genotype::cardinality() const noexcept {
  return static_cast<std::size_t>(std::count(genes_.begin(), genes_.end(), std::uint8_t{1}));
}

std::string Genotype::to_string() const {
  std::string s;
  s.reserve(genes_.size());
  for (auto g : genes_) s += g ? '1' : '0';
  return s;
}

void repair(Genotype& g, Rng& rng) {
  if (g.size() > 0 && g.empty_mask()) g.set(rng.below(g.size()), true);
}

Query decode(const Genotype& g, const SearchPattern& pattern) {
  if (g.size() != pattern.terms.size()) {
    throw Error(ErrorCode::GenotypeMismatch, "mask length " + std::to_string(g.size()) + " != vocabulary size " +
                                                 std::to_string(pattern.terms.size()));
  }
  Query q{pattern.marker, {}};
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i]) q.terms.push_back(pattern.terms[i].text);
  }
  return q;
}

void validate(const GAConfig& cfg) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); };
  auto rate = [](double r) { return r >= 0.0 && r <= 1.0; };
  if (cfg.population_size < 1) fail("population_size must be >= 1");
  if (cfg.tournament_size < 1) fail("tournament_size must be >= 1");
  if (cfg.top_m < 1) fail("top_m must be >= 1");
  if (cfg.top_documents < 1) fail("top_documents must be >= 1");
  if (cfg.elitism >= cfg.population_size) fail("elitism must be smaller than population_size");
  if (!rate(cfg.crossover_rate)) fail("crossover_rate must be in [0,1]");
  if (cfg.mutation_rate && !rate(*cfg.mutation_rate)) fail("mutation_rate must be in [0,1]");
}

std::vector<Genotype> init_population(const SearchPattern& pattern, const GAConfig& cfg, Rng& rng) {
  const std::size_t n = pattern.terms.size();
  std::vector<Genotype> population;
  population.reserve(cfg.population_size);
  for (std::size_t i = 0; i < cfg.population_size; ++i) {
    std::vector<std::uint8_t> genes(n);
    for (auto& g : genes) g = rng.bernoulli(0.5);
    Genotype individual(std::move(genes));
    repair(individual, rng);
    population.push_back(std::move(individual));
  }
  return population;
}

double fitness(const Genotype& g, const SearchPattern& pattern, const SourceAdapter& source, std::size_t n_top) {
  const Query query = decode(g, pattern);
  std::vector<Feature> features;
  std::vector<double> weights;
  features.push_back(tokenize(pattern.marker));
  weights.push_back(1.0);
  for (const auto& t : pattern.terms) {
    features.push_back(tokenize(t.text));
    weights.push_back(t.weight);
  }
  double pattern_norm = 0.0;
  for (double w : weights) pattern_norm += w * w;
  pattern_norm = std::sqrt(pattern_norm);

  const auto docs = source.feature_counts(query, n_top, features);
  if (docs.empty()) return 0.0;
  double total = 0.0;
  for (const auto& counts : docs) {
    double dot = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
      const double v = counts[j] * weights[j];
      dot += v * weights[j];
      norm += v * v;
    }
    if (norm > 0.0) total += dot / (std::sqrt(norm) * pattern_norm);
  }
  return std::clamp(total / static_cast<double>(docs.size()), 0.0, 1.0);
}

std::pair<Genotype, Genotype> crossover_at(const Genotype& a, const Genotype& b, std::size_t cut, Rng& rng) {
  if (a.size() != b.size()) throw Error(ErrorCode::GenotypeMismatch, "parents differ in length");
  if (cut > a.size()) throw Error(ErrorCode::OutOfRange, "crossover cut beyond genotype length");
  std::vector<std::uint8_t> first(a.genes().begin(), a.genes().begin() + static_cast<std::ptrdiff_t>(cut));
  std::vector<std::uint8_t> second(b.genes().begin(), b.genes().begin() + static_cast<std::ptrdiff_t>(cut));
  first.insert(first.end(), b.genes().begin() + static_cast<std::ptrdiff_t>(cut), b.genes().end());
  second.insert(second.end(), a.genes().begin() + static_cast<std::ptrdiff_t>(cut), a.genes().end());
  std::pair<Genotype, Genotype> children{Genotype(std::move(first)), Genotype(std::move(second))};
  repair(children.first, rng);
  repair(children.second, rng);
  return children;
}

std::pair<Genotype, Genotype> crossover(const Genotype& a, const Genotype& b, Rng& rng) {
  if (a.size() != b.size()) throw Error(ErrorCode::GenotypeMismatch, "parents differ in length");
  if (a.size() < 2) return {a, b};
  return crossover_at(a, b, 1 + rng.below(a.size() - 1), rng);
}

Genotype mutate(const Genotype& g, double rate, Rng& rng) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw Error(ErrorCode::OutOfRange, "mutation rate outside [0,1]");
  Genotype out = g;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (rng.bernoulli(rate)) out.flip(i);
  }
  repair(out, rng);
  return out;
}

bool ranks_before(double fa, const Genotype& a, double fb, const Genotype& b) {
  if (fa != fb) return fa > fb;
  if (a.cardinality() != b.cardinality()) return a.cardinality() < b.cardinality();
  return a < b;
}

namespace {

class FitnessCache {
 public:
  FitnessCache(const SearchPattern& pattern, const SourceAdapter& source, const GAConfig& cfg)
      : pattern_(pattern), source_(source), cfg_(cfg) {}

  std::vector<double> evaluate(const std::vector<Genotype>& population) {
    std::vector<Genotype> pending;
    for (const auto& g : population) {
      if (!known_.contains(g) &&
          std::find(pending.begin(), pending.end(), g) == pending.end()) {
        pending.push_back(g);
      }
    }
    const auto values = cfg_.parallel
                            ? kernels::evaluate_fitness_parallel(pending, pattern_, source_, cfg_.top_documents)
                            : kernels::evaluate_fitness_serial(pending, pattern_, source_, cfg_.top_documents);
    for (std::size_t i = 0; i < pending.size(); ++i) known_.emplace(pending[i], values[i]);
    evaluations_ += pending.size();

    std::vector<double> out;
    out.reserve(population.size());
    for (const auto& g : population) out.push_back(known_.at(g));
    return out;
  }

  double at(const Genotype& g) const { return known_.at(g); }
  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  const SearchPattern& pattern_;
  const SourceAdapter& source_;
  const GAConfig& cfg_;
  std::map<Genotype, double> known_;
  std::size_t evaluations_ = 0;
};

GenerationStats stats_of(std::size_t generation, const std::vector<double>& fit) {
  GenerationStats s{generation, fit.front(), 0.0};
  for (double f : fit) {
    s.best = std::max(s.best, f);
    s.mean += f;
  }
  s.mean /= static_cast<double>(fit.size());
  return s;
}

}  // namespace

EvolutionReport evolve(const SearchPattern& pattern, const SourceAdapter& source, const GAConfig& cfg) {
  validate(pattern);
  validate(cfg);
  const std::size_t vocab = pattern.terms.size();
  const double mutation_rate = cfg.effective_mutation_rate(vocab);

  Rng rng(cfg.rng_seed);
  FitnessCache cache(pattern, source, cfg);
  std::map<Genotype, std::size_t> multiplicity;

  EvolutionReport report;
  std::vector<Genotype> population = init_population(pattern, cfg, rng);
  std::vector<double> fit = cache.evaluate(population);
  for (const auto& g : population) ++multiplicity[g];
  report.generations.push_back(stats_of(0, fit));

  auto tournament = [&]() -> const Genotype& {
    std::size_t best = rng.below(population.size());
    for (std::size_t i = 1; i < cfg.tournament_size; ++i) {
      const std::size_t c = rng.below(population.size());
      if (ranks_before(fit[c], population[c], fit[best], population[best])) best = c;
    }
    return population[best];
  };

  double best_so_far = report.generations.back().best;
  std::size_t stagnant = 0;
  for (std::size_t gen = 1; gen <= cfg.generations; ++gen) {
    std::vector<std::size_t> order(population.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return ranks_before(fit[a], population[a], fit[b], population[b]);
    });

    std::vector<Genotype> next;
    next.reserve(cfg.population_size);
    for (std::size_t e = 0; e < cfg.elitism; ++e) next.push_back(population[order[e]]);
    while (next.size() < cfg.population_size) {
      const Genotype& a = tournament();
      const Genotype& b = tournament();
      auto children = rng.bernoulli(cfg.crossover_rate) ? crossover(a, b, rng) : std::pair{a, b};
      next.push_back(mutate(children.first, mutation_rate, rng));
      if (next.size() < cfg.population_size) next.push_back(mutate(children.second, mutation_rate, rng));
    }

    population = std::move(next);
    fit = cache.evaluate(population);
    for (const auto& g : population) ++multiplicity[g];
    report.generations.push_back(stats_of(gen, fit));

    if (report.generations.back().best > best_so_far) {
      best_so_far = report.generations.back().best;
      stagnant = 0;
    } else if (++stagnant >= cfg.stagnation_limit) {
      report.stopped_early = true;
      break;
    }
  }

  std::vector<EffectiveQuery> seen;
  seen.reserve(multiplicity.size());
  for (const auto& [g, n] : multiplicity) seen.push_back({g, decode(g, pattern), cache.at(g), n});
  std::sort(seen.begin(), seen.end(), [](const EffectiveQuery& a, const EffectiveQuery& b) {
    return ranks_before(a.fitness, a.mask, b.fitness, b.mask);
  });
  if (seen.size() > cfg.top_m) seen.erase(seen.begin() + static_cast<std::ptrdiff_t>(cfg.top_m), seen.end());
  report.best_queries = std::move(seen);
  report.evaluations = cache.evaluations();
  return report;
}

ExhaustiveResult exhaustive_best(const SearchPattern& pattern, const SourceAdapter& source, std::size_t n_top) {
  validate(pattern);
  const std::size_t vocab = pattern.terms.size();
  if (vocab > kExhaustiveLimit) {
    throw Error(ErrorCode::TooLarge, "exhaustive search over " + std::to_string(vocab) + " terms");
  }
  std::vector<Genotype> all;
  all.reserve((std::size_t{1} << vocab) - 1);
  for (std::uint32_t bits = 1; bits < (1u << vocab); ++bits) {
    std::vector<std::uint8_t> genes(vocab);
    for (std::size_t i = 0; i < vocab; ++i) genes[i] = (bits >> i) & 1u;
    all.emplace_back(std::move(genes));
  }
  const auto values = kernels::evaluate_fitness_parallel(all, pattern, source, n_top);
  std::size_t best = 0;
  for (std::size_t i = 1; i < all.size(); ++i) {
    if (ranks_before(values[i], all[i], values[best], all[best])) best = i;
  }
  return {all[best], decode(all[best], pattern), values[best]};
}

}  // namespace innov
