#include "innov/agents.hpp"

#include <algorithm>
#include <tuple>

#include "innov/detail/parallel.hpp"
#include "innov/errors.hpp"
#include "innov/genome.hpp"

namespace innov {

void validate(const Thresholds& th) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(th.nov_star) || !in_unit(th.rel_star)) {
    throw Error(ErrorCode::InvalidConfig, "thresholds must lie in [0,1]");
  }
}

int indicator(const InnovationScore& score, const Thresholds& th) {
  return (score.nov > th.nov_star || score.rel > th.rel_star) ? 0 : 1;
}

namespace {

IndicatorEvidence fuse(const std::vector<AgentState>& agents, const std::vector<AgentInput>& inputs,
                       Indicator which) {
  std::vector<SourceEvidence> evidence;
  evidence.reserve(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i) {
    evidence.push_back({which == Indicator::Novelty ? agents[i].nov_mass : agents[i].rel_mass, inputs[i].profile});
  }
  try {
    GroupCombination group = combine_group(evidence);
    BeliefSummary summary = belief_summary(group.combined);
    return {std::move(group), std::move(summary)};
  } catch (const TotalConflictError& e) {
    throw TotalConflictError(e.step(), std::string(to_string(which)) + " evidence: " + e.what());
  }
}

}  // namespace

RunResult run_agents_on_batches(std::span<const AgentInput> inputs_span, const Frame& frame, const Thresholds& th,
                                const RunOptions& options) {
  validate(th);
  if (inputs_span.empty()) throw Error(ErrorCode::EmptyGroup, "no agents to run");
  const std::vector<AgentInput> inputs(inputs_span.begin(), inputs_span.end());
  for (const auto& in : inputs) validate(in.profile);

  std::vector<std::optional<AgentState>> states(inputs.size());
  detail::parallel_for(inputs.size(), [&](std::size_t i) {
    const AgentInput& in = inputs[i];
    InnovationScore score = score_object(in.batch);
    MassFunction nov_mass = contributions_to_mass(score.per_query_nov, frame, options.band_fraction);
    MassFunction rel_mass = contributions_to_mass(score.per_query_rel, frame, options.band_fraction);
    BeliefSummary nov_summary = belief_summary(nov_mass);
    BeliefSummary rel_summary = belief_summary(rel_mass);
    const int F = indicator(score, th);
    states[i] = AgentState{in.profile.id, in.batch,           std::move(score),       std::move(nov_mass),
                           std::move(rel_mass), std::move(nov_summary), std::move(rel_summary), F, {}};
  });

  std::vector<AgentState> agents;
  agents.reserve(states.size());
  for (auto& s : states) agents.push_back(std::move(*s));

  std::vector<AnomalyRecord> registry;
  for (const auto& a : agents) {
    if (a.F != 0) continue;
    if (a.score.nov > th.nov_star) {
      registry.push_back({a.agent_id, Indicator::Novelty, a.score.nov, th.nov_star, a.batch.period});
    }
    if (a.score.rel > th.rel_star) {
      registry.push_back({a.agent_id, Indicator::Demand, a.score.rel, th.rel_star, a.batch.period});
    }
  }
  std::sort(registry.begin(), registry.end(), [](const AnomalyRecord& x, const AnomalyRecord& y) {
    return std::tie(x.period, x.agent_id, x.trigger) < std::tie(y.period, y.agent_id, y.trigger);
  });

  IndicatorEvidence nov = fuse(agents, inputs, Indicator::Novelty);
  IndicatorEvidence rel = fuse(agents, inputs, Indicator::Demand);
  for (auto& a : agents) a.utility.conflict_with_combined = conflict(a.nov_mass, nov.group.combined);
  RunResult result{std::move(agents), std::move(registry), std::move(nov), std::move(rel)};
  return result;
}

MeasurementBatch measure(const SourceAdapter& source, const SearchPattern& pattern, std::span<const Query> queries,
                         int year) {
  if (queries.empty()) throw Error(ErrorCode::EmptyBatch, "no queries to measure");
  const Capabilities caps = source.capabilities();
  const std::optional<Date> until = caps.dated_counts ? std::optional(Date::end_of_year(year)) : std::nullopt;

  MeasurementBatch batch;
  batch.source_id = source.profile().id;
  batch.period = std::to_string(year);
  const Query marker = marker_query(pattern);
  batch.marker_hits = source.count(marker, until);
  batch.marker_frequency = source.frequency(marker, year);
  batch.queries.reserve(queries.size());
  for (std::size_t k = 0; k < queries.size(); ++k) {
    batch.queries.push_back({"q" + std::to_string(k + 1), source.count(queries[k], until),
                             source.frequency(queries[k], year)});
  }
  return batch;
}

RunResult run_agents(const SearchPattern& pattern, std::span<const SourceAdapter* const> sources,
                     std::span<const Query> queries, const Frame& frame, const Thresholds& th, int year,
                     const RunOptions& options) {
  if (sources.empty()) throw Error(ErrorCode::EmptyGroup, "no sources");
  std::vector<AgentInput> inputs(sources.size());
  detail::parallel_for(sources.size(), [&](std::size_t i) {
    try {
      inputs[i] = {measure(*sources[i], pattern, queries, year), sources[i]->profile()};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SourceError) throw;
      throw Error(ErrorCode::SourceError, "source '" + sources[i]->profile().id + "': " + e.what());
    }
  });

  RunResult result = run_agents_on_batches(inputs, frame, th, options);

  detail::parallel_for(sources.size(), [&](std::size_t i) {
    if (!sources[i]->capabilities().retrieval) return;
    double best = 0.0;
    for (const auto& q : queries) {
      std::vector<std::uint8_t> genes(pattern.terms.size());
      for (std::size_t t = 0; t < pattern.terms.size(); ++t) {
        genes[t] = std::find(q.terms.begin(), q.terms.end(), pattern.terms[t].text) != q.terms.end();
      }
      best = std::max(best, fitness(Genotype(std::move(genes)), pattern, *sources[i], options.top_documents));
    }
    result.agents[i].utility.best_query_fitness = best;
  });
  return result;
}

}  // namespace innov
