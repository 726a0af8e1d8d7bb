#include "innov/kernels.hpp"

#include "innov/detail/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace innov::kernels {

using detail::parallel_for;

std::vector<double> evaluate_fitness_serial(std::span<const Genotype> population, const SearchPattern& pattern,
                                            const SourceAdapter& source, std::size_t n_top) {
  std::vector<double> out;
  out.reserve(population.size());
  for (const auto& g : population) out.push_back(fitness(g, pattern, source, n_top));
  return out;
}

std::vector<double> evaluate_fitness_parallel(std::span<const Genotype> population, const SearchPattern& pattern,
                                              const SourceAdapter& source, std::size_t n_top) {
  std::vector<double> out(population.size());
  parallel_for(population.size(), [&](std::size_t i) { out[i] = fitness(population[i], pattern, source, n_top); });
  return out;
}

std::vector<InnovationScore> score_batches_serial(std::span<const MeasurementBatch> batches) {
  std::vector<InnovationScore> out;
  out.reserve(batches.size());
  for (const auto& b : batches) out.push_back(score_object(b));
  return out;
}

std::vector<InnovationScore> score_batches_parallel(std::span<const MeasurementBatch> batches) {
  std::vector<InnovationScore> out(batches.size());
  parallel_for(batches.size(), [&](std::size_t i) { out[i] = score_object(batches[i]); });
  return out;
}

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace innov::kernels
