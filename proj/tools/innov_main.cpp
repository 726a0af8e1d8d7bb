// innov: evolve search queries, score novelty/demand, fuse evidence across
// sources and fit trends.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "innov/errors.hpp"
#include "innov/formats.hpp"
#include "innov/pipeline.hpp"

namespace {

using namespace innov;
namespace fs = std::filesystem;

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kSourceError = 3,
  kMarkerNotFound = 4,
  kTotalConflict = 5,
  kDegenerateSeries = 6,
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::SourceError: return kSourceError;
    case ErrorCode::MarkerNotFound: return kMarkerNotFound;
    case ErrorCode::TotalConflict: return kTotalConflict;
    case ErrorCode::DegenerateSeries: return kDegenerateSeries;
    case ErrorCode::InvalidConfig:
    case ErrorCode::ParseError:
    case ErrorCode::InvalidPattern:
    case ErrorCode::InvalidFrame:
    case ErrorCode::InvalidAlpha:
    case ErrorCode::InvalidSpec:
    case ErrorCode::EmptyCorpus:
    case ErrorCode::DuplicateDocument: return kConfigError;
    default: return kFailure;
  }
}

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<double> nov_threshold;
  std::optional<double> rel_threshold;
};

app::Workspace open(const Globals& g) {
  if (g.config.empty()) throw Error(ErrorCode::InvalidConfig, "--config is required");
  app::RunConfig cfg = app::load_config(g.config);
  if (g.seed) cfg.ga.rng_seed = *g.seed;
  if (!g.out.empty()) cfg.output_dir = g.out;
  if (g.nov_threshold) cfg.thresholds.nov_star = *g.nov_threshold;
  if (g.rel_threshold) cfg.thresholds.rel_star = *g.rel_threshold;
  return app::open_workspace(std::move(cfg));
}

void write_synthetic(const SyntheticSpec& spec, const fs::path& out) {
  const SyntheticData data = synthetic_source(spec);
  fs::create_directories(out);
  {
    std::ofstream corpus(out / "corpus.jsonl", std::ios::binary);
    io::write_corpus_jsonl(corpus, data.corpus);
    std::ofstream log(out / "query_log.csv", std::ios::binary);
    io::write_query_log(log, data.query_log);
  }
  for (const auto& o : data.objects) {
    io::Json j = io::to_json(o.pattern);
    j["planted"] = o.planted;
    io::write_json_file(out / ("pattern-" + o.pattern.name + ".json"), j);
  }
  std::cout << "wrote " << data.corpus.size() << " documents, " << data.query_log.size() << " log entries and "
            << data.objects.size() << " patterns to " << out.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Innovation scoring: evolve queries, measure sources, fuse evidence, fit trends"};
  cli.require_subcommand(1);
  Globals g;
  cli.add_option("--config", g.config, "Run configuration (JSON)");
  cli.add_option("--seed", g.seed, "GA random seed (overrides the config)");
  cli.add_option("--out", g.out, "Output directory (overrides the config)");

  auto* evolve = cli.add_subcommand("evolve", "Evolve the effective query multiset (queries.json, evolution.json)");
  evolve->fallthrough();

  auto* score = cli.add_subcommand("score", "Measure queries on every source and score them");
  std::string queries_file;
  score->add_option("--queries", queries_file, "queries.json (default: <out>/queries.json)");
  score->fallthrough();

  auto* combine = cli.add_subcommand("combine", "Run the agents and fuse their evidence");
  std::string measurements_file;
  std::optional<std::string> period;
  combine->add_option("--measurements", measurements_file, "measurements.csv (default: <out>/measurements.csv)");
  combine->add_option("--period", period, "Period to combine (default: latest)");
  combine->add_option("--nov-threshold", g.nov_threshold, "Novelty threshold")->check(CLI::Range(0.0, 1.0));
  combine->add_option("--rel-threshold", g.rel_threshold, "Demand threshold")->check(CLI::Range(0.0, 1.0));
  combine->fallthrough();

  auto* trend = cli.add_subcommand("trend", "Fit linear trends over scored periods (trend.csv, trend.json)");
  std::string scores_file;
  trend->add_option("--scores", scores_file, "scores.json (default: <out>/scores.json)");
  trend->fallthrough();

  auto* demo = cli.add_subcommand("demo", "Full pipeline on the bundled fixture");
  demo->add_option("--nov-threshold", g.nov_threshold, "Novelty threshold")->check(CLI::Range(0.0, 1.0));
  demo->add_option("--rel-threshold", g.rel_threshold, "Demand threshold")->check(CLI::Range(0.0, 1.0));
  demo->fallthrough();

  auto* synth = cli.add_subcommand("synth", "Generate a synthetic corpus, query log and patterns");
  SyntheticSpec spec;
  synth->add_option("--planted", spec.planted_objects, "Planted novel objects");
  synth->add_option("--common", spec.common_objects, "Common objects");
  synth->add_option("--terms", spec.terms_per_object, "Terms per object");
  synth->add_option("--docs-per-year", spec.docs_per_year, "Documents per object and year");
  synth->add_option("--years", spec.years, "Number of years");
  synth->add_option("--start-year", spec.start_year, "First year");
  synth->add_option("--noise", spec.noise, "Noise level in [0,1]");
  synth->add_option("--vocab", spec.vocab, "Filler vocabulary size");
  synth->fallthrough();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (*evolve) {
      const auto ws = open(g);
      const auto report = app::cmd_evolve(ws);
      std::cout << "best query: " << report.best_queries.front().query.text() << " (fitness "
                << report.best_queries.front().fitness << ", " << report.evaluations << " evaluations)\n";
    } else if (*score) {
      const auto ws = open(g);
      const fs::path q = queries_file.empty() ? ws.config.output_dir / app::Outputs::kQueries : fs::path(queries_file);
      const auto rows = app::cmd_score(ws, q);
      std::cout << "scored " << rows.size() << " (source, period) batches\n";
    } else if (*combine) {
      const auto ws = open(g);
      const fs::path m =
          measurements_file.empty() ? ws.config.output_dir / app::Outputs::kMeasurements : fs::path(measurements_file);
      const auto run = app::cmd_combine(ws, m, period);
      std::cout << run.agents.size() << " agents, " << run.registry.size() << " anomalies\n";
    } else if (*trend) {
      fs::path out = g.out;
      if (out.empty()) out = g.config.empty() ? fs::path("out") : app::load_config(g.config).output_dir;
      const fs::path s = scores_file.empty() ? out / app::Outputs::kScores : fs::path(scores_file);
      const auto report = app::cmd_trend(s, out);
      std::cout << "nov slope " << report.nov.slope << ", rel slope " << report.rel.slope << "\n";
    } else if (*demo) {
      if (g.config.empty()) g.config = std::string(INNOV_DATA_DIR) + "/demo/config.json";
      if (g.out.empty()) g.out = "demo_out";
      const auto ws = open(g);
      app::cmd_demo(ws);
      std::cout << "demo outputs written to " << ws.config.output_dir.string() << "\n";
    } else if (*synth) {
      if (g.seed) spec.seed = *g.seed;
      write_synthetic(spec, g.out.empty() ? fs::path("synthetic") : fs::path(g.out));
    }
  } catch (const TotalConflictError& e) {
    std::cerr << "error: " << e.what() << " (step " << e.step() << ")\n";
    return kTotalConflict;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}
