#pragma once

// Per-source search agents, the anomalous-state indicator and the registry
// of innovation candidates.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "innov/evidence.hpp"
#include "innov/metrics.hpp"
#include "innov/sources.hpp"

namespace innov {

struct Thresholds {
  double nov_star = 0.7;
  double rel_star = 0.7;
};

void validate(const Thresholds& th);

/// 0 when either normalized indicator strictly exceeds its threshold (an
/// innovation candidate), 1 otherwise.
int indicator(const InnovationScore& score, const Thresholds& th);

struct AnomalyRecord {
  std::string agent_id;
  Indicator trigger = Indicator::Novelty;
  double value = 0.0;
  double threshold = 0.0;
  std::string period;
};

/// Reporting pair: fitness of the agent's best query (when its source can
/// retrieve documents) and conflict of its novelty evidence with the
/// combined novelty evidence.
struct AgentUtility {
  std::optional<double> best_query_fitness;
  double conflict_with_combined = 0.0;
};

struct AgentState {
  std::string agent_id;
  MeasurementBatch batch;
  InnovationScore score;
  MassFunction nov_mass;
  MassFunction rel_mass;
  BeliefSummary nov_summary;
  BeliefSummary rel_summary;
  int F = 1;
  AgentUtility utility;
};

struct IndicatorEvidence {
  GroupCombination group;
  BeliefSummary summary;
};

struct RunResult {
  std::vector<AgentState> agents;      // input order
  std::vector<AnomalyRecord> registry;  // ordered by (period, agent_id, trigger)
  IndicatorEvidence nov;
  IndicatorEvidence rel;
};

struct AgentInput {
  MeasurementBatch batch;
  SourceProfile profile;
};

struct RunOptions {
  double band_fraction = kDefaultBoundaryBand;
  std::size_t top_documents = 20;
};

/// Scores each batch, bins its per-query contributions into the frame, sets
/// the indicator, and fuses all agents' evidence with their reliabilities.
RunResult run_agents_on_batches(std::span<const AgentInput> inputs, const Frame& frame, const Thresholds& th,
                                const RunOptions& options = {});

/// Measures R_k / F_k of every query on one source for a year: counts over
/// documents dated up to the end of that year, frequencies within it.
MeasurementBatch measure(const SourceAdapter& source, const SearchPattern& pattern, std::span<const Query> queries,
                         int year);

/// Full agent run: measure on every source (concurrently), then
/// run_agents_on_batches.
RunResult run_agents(const SearchPattern& pattern, std::span<const SourceAdapter* const> sources,
                     std::span<const Query> queries, const Frame& frame, const Thresholds& th, int year,
                     const RunOptions& options = {});

}  // namespace innov
