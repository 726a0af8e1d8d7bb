#pragma once

// Data-parallel loops. Each kernel has a serial reference; the parallel form
// must return bit-identical results.

#include <span>
#include <vector>

#include "innov/genome.hpp"
#include "innov/metrics.hpp"

namespace innov::kernels {

std::vector<double> evaluate_fitness_serial(std::span<const Genotype> population, const SearchPattern& pattern,
                                            const SourceAdapter& source, std::size_t n_top);
std::vector<double> evaluate_fitness_parallel(std::span<const Genotype> population, const SearchPattern& pattern,
                                              const SourceAdapter& source, std::size_t n_top);

std::vector<InnovationScore> score_batches_serial(std::span<const MeasurementBatch> batches);
std::vector<InnovationScore> score_batches_parallel(std::span<const MeasurementBatch> batches);

/// Threads the parallel kernels use (1 without OpenMP).
int max_threads() noexcept;

}  // namespace innov::kernels
