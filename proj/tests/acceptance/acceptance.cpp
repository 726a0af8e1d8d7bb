// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Every tolerance and trial count is fixed below.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "innov/agents.hpp"
#include "innov/errors.hpp"
#include "innov/genome.hpp"
#include "innov/metrics.hpp"
#include "innov/sources.hpp"
#include "oracles.hpp"

using namespace innov;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and sizes.
constexpr double kNormTol = 1e-9;
constexpr double kAlgebraTol = 1e-9;
constexpr double kOracleTol = 1e-12;
constexpr double kEndpointTol = 1e-12;
constexpr int kRandomMasses = 1000;
constexpr int kMaxK = 4;
constexpr double kAlgebraBudgetSeconds = 5.0;
constexpr int kOraclePairs = 500;
constexpr int kFormulaTrials = 10000;
constexpr int kGaSeeds = 20;
constexpr int kGaRequired = 18;  // 90% of 20
constexpr double kGaQuality = 0.95;
constexpr std::size_t kGaVocabulary = 12;
constexpr double kGaBudgetSeconds = 10.0;
constexpr int kDirectionSeeds = 10;
constexpr std::size_t kObjectsPerKind = 10;
constexpr int kYears = 20;
constexpr int kLateYears = 5;
constexpr int kBiconditionalTrials = 1000;
constexpr double kDemoBudgetSeconds = 60.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int n, const std::string& name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << " [" << n << "] " << name << ": " << o.detail << std::endl;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double max_diff(const oracle::Masses& a, const oracle::Masses& b) {
  double d = 0.0;
  for (const auto& [s, v] : a) d = std::max(d, std::abs(v - (b.contains(s) ? b.at(s) : 0.0)));
  for (const auto& [s, v] : b) d = std::max(d, std::abs(v - (a.contains(s) ? a.at(s) : 0.0)));
  return d;
}

std::optional<MassFunction> try_combine(const MassFunction& a, const MassFunction& b) {
  try {
    return combine_dempster(a, b);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::TotalConflict) return std::nullopt;
    throw;
  }
}

Outcome algebra_suite() {
  const auto t0 = Clock::now();
  Rng rng(20240601);
  int violations = 0;
  int assoc_checked = 0;
  for (int i = 0; i < kRandomMasses; ++i) {
    const int k = 2 + static_cast<int>(rng.below(kMaxK - 1));
    const auto m = oracle::random_mass(rng, k);
    double total = 0.0;
    for (const auto& e : m.focal()) total += e.mass;
    if (std::abs(total - 1.0) > kNormTol) ++violations;

    const FocalSet omega = m.frame().omega();
    for (std::uint32_t bits = 1; bits <= omega.bits(); ++bits) {
      const FocalSet a = FocalSet::from_bits(bits);
      const double b = bel(m, a);
      const double p = pl(m, a);
      if (b > p + kAlgebraTol) ++violations;
      const std::uint32_t comp = omega.bits() & ~bits;
      const double bel_not = comp ? bel(m, FocalSet::from_bits(comp)) : 0.0;
      if (std::abs(p - (1.0 - bel_not)) > kAlgebraTol) ++violations;
    }

    const auto m2 = oracle::random_mass(rng, k);
    const auto m3 = oracle::random_mass(rng, k);
    const auto ab = try_combine(m, m2);
    const auto ba = try_combine(m2, m);
    if (ab.has_value() != ba.has_value()) {
      ++violations;
    } else if (ab && max_diff(oracle::to_sets(*ab), oracle::to_sets(*ba)) > kAlgebraTol) {
      ++violations;
    }
    const auto bc = try_combine(m2, m3);
    const auto left = ab ? try_combine(*ab, m3) : std::nullopt;
    const auto right = bc ? try_combine(m, *bc) : std::nullopt;
    if (left && right) {
      ++assoc_checked;
      if (max_diff(oracle::to_sets(*left), oracle::to_sets(*right)) > kAlgebraTol) ++violations;
    }

    const auto with_vacuous = combine_dempster(m, vacuous_mass(m.frame()));
    if (oracle::to_sets(with_vacuous) != oracle::to_sets(m)) ++violations;
    if (oracle::to_sets(discount(m, 1.0)) != oracle::to_sets(m)) ++violations;
    if (!discount(m, 0.0).is_vacuous()) ++violations;
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < kAlgebraBudgetSeconds,
          fmt("%d masses, %d associativity triples, %d violations, %.2f s (budget %.0f s)", kRandomMasses,
              assoc_checked, violations, secs, kAlgebraBudgetSeconds)};
}

Outcome oracle_equivalence() {
  Rng rng(77);
  double worst = 0.0;
  int checked = 0;
  while (checked < kOraclePairs) {
    const int k = 2 + static_cast<int>(rng.below(kMaxK - 1));
    const auto a = oracle::random_mass(rng, k);
    const auto b = oracle::random_mass(rng, k);
    const auto [ref, conflict_ref] = oracle::dempster(oracle::to_sets(a), oracle::to_sets(b));
    if (ref.empty()) continue;  // total conflict has no combination
    const auto got = combine_dempster(a, b);
    worst = std::max(worst, max_diff(oracle::to_sets(got), ref));
    worst = std::max(worst, std::abs(conflict(a, b) - conflict_ref));
    ++checked;
  }
  const Frame f = make_frame(3);
  const auto e1 = combine_dempster(make_mass(f, {{FocalSet::of({1}), 0.5}, {f.omega(), 0.5}}),
                                   make_mass(f, {{FocalSet::of({1}), 0.4}, {f.omega(), 0.6}}));
  const bool ex1 = std::abs(e1.mass(FocalSet::of({1})) - 0.7) <= kOracleTol &&
                   std::abs(e1.mass(f.omega()) - 0.3) <= kOracleTol && e1.size() == 2;
  const auto h1 = make_mass(f, {{FocalSet::of({1}), 0.9}, {FocalSet::of({3}), 0.1}});
  const auto h2 = make_mass(f, {{FocalSet::of({2}), 0.9}, {FocalSet::of({3}), 0.1}});
  const auto e2 = combine_dempster(h1, h2);
  const bool ex2 = e2.size() == 1 && e2.mass(FocalSet::of({3})) == 1.0 && std::abs(conflict(h1, h2) - 0.99) <= kOracleTol;
  return {worst <= kOracleTol && ex1 && ex2,
          fmt("%d pairs, max deviation %.3g (tol %.0e); {1}:0.7/Omega:0.3 %s; {3}:1.0 K=0.99 %s", checked, worst,
              kOracleTol, ex1 ? "ok" : "MISMATCH", ex2 ? "ok" : "MISMATCH")};
}

Outcome formula_endpoints() {
  constexpr double e = std::numbers::e;
  int bad_endpoints = 0;
  Rng rng(31);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t r0 = 1 + rng.below(100000);
    const double f0 = rng.uniform(0.001, 1e6);
    const std::vector<std::uint64_t> full{r0};
    const std::vector<std::uint64_t> none{0};
    const std::vector<double> ffull{f0};
    const std::vector<double> fnone{0.0};
    if (std::abs(novelty_raw(full, r0) - 1.0) > kEndpointTol) ++bad_endpoints;
    if (std::abs(novelty_raw(none, r0) - e) > kEndpointTol) ++bad_endpoints;
    if (std::abs(demand_raw(ffull, f0) - 0.0) > kEndpointTol) ++bad_endpoints;
    if (std::abs(demand_raw(fnone, f0) - (1.0 - e)) > kEndpointTol) ++bad_endpoints;
  }

  int out_of_range = 0;
  int not_monotone = 0;
  for (int t = 0; t < kFormulaTrials; ++t) {
    MeasurementBatch b{"s", "2017", {}, 1 + rng.below(10000), rng.uniform(0.01, 1e4)};
    const auto n = 1 + rng.below(10);
    for (std::uint64_t k = 0; k < n; ++k) {
      b.queries.push_back({"q", rng.below(b.marker_hits + 1), rng.uniform(0.0, b.marker_frequency)});
    }
    const auto s = score_object(b);
    if (s.nov < 0.0 || s.nov > 1.0 || s.rel < 0.0 || s.rel > 1.0) ++out_of_range;

    // Move one measurement within [0, baseline]: more hits must lower nov,
    // more demand must raise rel, and the reverse.
    const std::size_t k = rng.below(n);
    const auto base = score_object(b);
    MeasurementBatch r = b;
    auto& hits = r.queries[k].hits;
    const bool raise_hits = hits < r.marker_hits;
    hits = raise_hits ? hits + 1 + rng.below(r.marker_hits - hits) : hits - 1;
    const double nov = score_object(r).nov;
    if (raise_hits ? !(nov < base.nov) : !(nov > base.nov)) ++not_monotone;

    MeasurementBatch f = b;
    auto& freq = f.queries[k].frequency;
    const bool raise_freq = freq < f.marker_frequency && (freq == 0.0 || rng.bernoulli(0.5));
    freq = raise_freq ? freq + rng.uniform(0.01, 1.0) * (f.marker_frequency - freq) : freq * rng.uniform(0.0, 0.99);
    const double rel = score_object(f).rel;
    if (raise_freq ? !(rel > base.rel) : !(rel < base.rel)) ++not_monotone;
  }
  return {bad_endpoints == 0 && out_of_range == 0 && not_monotone == 0,
          fmt("endpoint misses %d (tol %.0e); %d batches, %d out of [0,1]; %d non-monotone perturbations", bad_endpoints,
              kEndpointTol, kFormulaTrials, out_of_range, not_monotone)};
}

struct Fixture {
  SyntheticData data;
  OfflineCorpusSource source;
};

Fixture synthetic_fixture(const SyntheticSpec& spec) {
  auto data = synthetic_source(spec);
  auto source = build_index(data.corpus, {"synthetic", 1.0});
  source.attach_query_log(data.query_log);
  return {std::move(data), std::move(source)};
}

Outcome ga_quality() {
  int hits = 0;
  std::size_t evaluations = 0;
  double worst_ratio = 1.0;
  double slowest = 0.0;
  for (int seed = 1; seed <= kGaSeeds; ++seed) {
    SyntheticSpec spec;
    spec.seed = 1000 + static_cast<std::uint64_t>(seed);
    spec.planted_objects = 1;
    spec.common_objects = 0;
    spec.terms_per_object = kGaVocabulary;
    spec.years = 5;
    spec.docs_per_year = 30;
    const auto fx = synthetic_fixture(spec);
    const auto& pattern = fx.data.objects.front().pattern;
    GAConfig cfg;
    cfg.rng_seed = static_cast<std::uint64_t>(seed);
    const auto t0 = Clock::now();
    const auto r = evolve(pattern, fx.source, cfg);
    slowest = std::max(slowest, seconds_since(t0));
    evaluations += r.evaluations;
    const auto ex = exhaustive_best(pattern, fx.source, cfg.top_documents);
    const double ratio = ex.fitness > 0.0 ? r.best_queries.front().fitness / ex.fitness : 1.0;
    worst_ratio = std::min(worst_ratio, ratio);
    if (ratio >= kGaQuality) ++hits;
  }
  return {hits >= kGaRequired && slowest < kGaBudgetSeconds,
          fmt("|V|=%zu: %d/%d seeds within %.0f%% of exhaustive (need %d), worst ratio %.4f, "
              "mean %.0f of %zu masks evaluated, slowest run %.3f s",
              kGaVocabulary, hits, kGaSeeds, kGaQuality * 100, kGaRequired, worst_ratio,
              static_cast<double>(evaluations) / kGaSeeds, (std::size_t{1} << kGaVocabulary) - 1, slowest)};
}

// Evolved effective queries of a pattern, then per-year scores on the source.
std::vector<InnovationScore> yearly_scores(const SearchPattern& pattern, const OfflineCorpusSource& source,
                                           const SyntheticSpec& spec, std::uint64_t ga_seed) {
  GAConfig cfg;
  cfg.rng_seed = ga_seed;
  const auto r = evolve(pattern, source, cfg);
  std::vector<Query> queries;
  for (const auto& q : r.best_queries) queries.push_back(q.query);
  std::vector<InnovationScore> out;
  for (int y = 0; y < spec.years; ++y) out.push_back(score_object(measure(source, pattern, queries, spec.start_year + y)));
  return out;
}

Outcome best_vs_random() {
  int wins = 0;
  std::string worst;
  for (int seed = 1; seed <= kDirectionSeeds; ++seed) {
    SyntheticSpec spec;
    spec.seed = 2000 + static_cast<std::uint64_t>(seed);
    spec.planted_objects = kObjectsPerKind;
    spec.common_objects = kObjectsPerKind;
    spec.years = kYears;
    spec.docs_per_year = 20;
    const auto fx = synthetic_fixture(spec);
    double nov[2] = {0, 0};
    double rel[2] = {0, 0};
    for (const auto& obj : fx.data.objects) {
      const auto scores = yearly_scores(obj.pattern, fx.source, spec, static_cast<std::uint64_t>(seed));
      const int kind = obj.planted ? 0 : 1;
      for (int y = 0; y < kYears; ++y) {
        nov[kind] += scores[y].nov / kYears;
        if (y >= kYears - kLateYears) rel[kind] += scores[y].rel / kLateYears;
      }
    }
    const double n = kObjectsPerKind;
    const bool ok = nov[0] > nov[1] && rel[0] > rel[1];
    if (ok) {
      ++wins;
    } else if (worst.empty()) {
      worst = fmt(" (seed %d: nov %.3f vs %.3f, late rel %.3f vs %.3f)", seed, nov[0] / n, nov[1] / n, rel[0] / n,
                  rel[1] / n);
    }
  }
  return {wins == kDirectionSeeds, fmt("planted above common on mean nov and late rel in %d/%d seeds", wins, kDirectionSeeds) + worst};
}

Outcome trend_direction() {
  int ok = 0;
  double max_nov_slope = -1e9;
  double min_rel_slope = 1e9;
  for (int seed = 1; seed <= kDirectionSeeds; ++seed) {
    SyntheticSpec spec;
    spec.seed = 3000 + static_cast<std::uint64_t>(seed);
    spec.planted_objects = 1;
    spec.common_objects = 1;
    spec.years = kYears;
    const auto fx = synthetic_fixture(spec);
    const auto& planted = fx.data.objects.front();
    const auto scores = yearly_scores(planted.pattern, fx.source, spec, static_cast<std::uint64_t>(seed));
    std::vector<TrendPoint> nov;
    std::vector<TrendPoint> rel;
    for (int y = 0; y < kYears; ++y) {
      nov.push_back({static_cast<double>(spec.start_year + y), scores[y].nov});
      rel.push_back({static_cast<double>(spec.start_year + y), scores[y].rel});
    }
    const double sn = trend_fit(nov).slope;
    const double sr = trend_fit(rel).slope;
    max_nov_slope = std::max(max_nov_slope, sn);
    min_rel_slope = std::min(min_rel_slope, sr);
    if (sn < 0.0 && sr > 0.0) ++ok;
  }
  return {ok == kDirectionSeeds, fmt("%d/%d seeds with nov slope < 0 and rel slope > 0 over %d periods "
                                     "(max nov slope %.4g, min rel slope %.4g)",
                                     ok, kDirectionSeeds, kYears, max_nov_slope, min_rel_slope)};
}

Outcome biconditional() {
  Rng rng(4242);
  int counterexamples = 0;
  int alarms = 0;
  int conflicts = 0;
  for (int t = 0; t < kBiconditionalTrials; ++t) {
    const Frame f = make_frame(2 + static_cast<int>(rng.below(4)));
    const Thresholds th{rng.uniform(), rng.uniform()};
    std::vector<AgentInput> inputs;
    const auto n = 1 + rng.below(6);
    for (std::uint64_t i = 0; i < n; ++i) {
      MeasurementBatch b{"s" + std::to_string(i), "2017", {}, 1 + rng.below(1000), rng.uniform(0.1, 100.0)};
      const auto s = 1 + rng.below(12);
      for (std::uint64_t k = 0; k < s; ++k) {
        b.queries.push_back({"q" + std::to_string(k + 1), rng.below(b.marker_hits + 1), rng.uniform(0.0, b.marker_frequency)});
      }
      inputs.push_back({b, {b.source_id, rng.uniform(0.0, 1.0)}});
    }
    try {
      const auto r = run_agents_on_batches(inputs, f, th);
      const bool any_zero = std::any_of(r.agents.begin(), r.agents.end(), [](const auto& a) { return a.F == 0; });
      if (any_zero) ++alarms;
      if (any_zero != !r.registry.empty()) ++counterexamples;
    } catch (const TotalConflictError&) {
      ++conflicts;
    }
  }
  return {counterexamples == 0 && conflicts < kBiconditionalTrials,
          fmt("%d trials (%d with alarms, %d totally conflicting), %d counterexamples", kBiconditionalTrials, alarms,
              conflicts, counterexamples)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome demo_end_to_end() {
  const auto base = fs::temp_directory_path() / "innov_acceptance_demo";
  fs::remove_all(base);
  double slowest = 0.0;
  for (const char* run : {"a", "b"}) {
    const std::string cmd = std::string(INNOV_EXE) + " demo --seed 7 --out " + (base / run).string() + " >/dev/null 2>&1";
    const auto t0 = Clock::now();
    const int status = std::system(cmd.c_str());
    slowest = std::max(slowest, seconds_since(t0));
    if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return {false, fmt("demo run %s failed with status %d", run, status)};
  }
  int files = 0;
  int differing = 0;
  for (const auto& e : fs::directory_iterator(base / "a")) {
    ++files;
    if (slurp(e.path()) != slurp(base / "b" / e.path().filename())) ++differing;
  }
  const bool complete = fs::exists(base / "a" / "queries.json") && fs::exists(base / "a" / "scores.json") &&
                        fs::exists(base / "a" / "run_report.json") && fs::exists(base / "a" / "trend.csv");
  fs::remove_all(base);
  return {complete && differing == 0 && slowest < kDemoBudgetSeconds,
          fmt("evolve->score->combine->trend wrote %d files, %d differ between runs, slowest run %.2f s (budget %.0f s)",
              files, differing, slowest, kDemoBudgetSeconds)};
}

}  // namespace

int main() {
  report(1, "evidence algebra suite", algebra_suite);
  report(2, "Dempster rule matches the enumeration oracle", oracle_equivalence);
  report(3, "indicator endpoints, range and monotonicity", formula_endpoints);
  report(4, "GA quality against exhaustive search", ga_quality);
  report(5, "planted objects outscore common ones", best_vs_random);
  report(6, "novelty falls and demand rises over time", trend_direction);
  report(7, "registry non-empty iff some agent alarms", biconditional);
  report(8, "demo pipeline end to end", demo_end_to_end);
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
