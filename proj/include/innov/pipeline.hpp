#pragma once

// Orchestration behind the command-line tool: configuration loading and the
// evolve -> score -> combine -> trend stages. Every stage writes its files
// under RunConfig::output_dir.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "innov/agents.hpp"
#include "innov/formats.hpp"
#include "innov/genome.hpp"
#include "innov/sources.hpp"

namespace innov::app {

namespace fs = std::filesystem;

struct SourceConfig {
  std::string id;
  double reliability = 1.0;
  fs::path corpus;
  std::optional<fs::path> query_log;
  AnalogyMode analogy = AnalogyMode::Analogous;
};

struct RunConfig {
  fs::path pattern;
  std::vector<SourceConfig> sources;
  fs::path output_dir = "out";
  GAConfig ga;
  int frame_k = 3;
  std::vector<std::string> frame_labels;  // generated when empty
  double band_fraction = kDefaultBoundaryBand;
  Thresholds thresholds;
  std::optional<int> period_from;
  std::optional<int> period_to;
};

/// Parses a config JSON; relative paths resolve against the file's directory.
/// Throws InvalidConfig naming the offending field.
RunConfig load_config(const fs::path& path);

/// Everything a run needs, parsed and indexed up front.
struct Workspace {
  RunConfig config;
  SearchPattern pattern;
  Frame frame;
  std::vector<std::unique_ptr<OfflineCorpusSource>> sources;

  std::vector<const SourceAdapter*> adapters() const;
  /// Years to score: the configured range, else the latest document year.
  std::vector<int> periods() const;
};

/// Fail-fast: loads pattern, corpora and logs. Any problem becomes
/// InvalidConfig with the file name.
Workspace open_workspace(RunConfig config);

struct Outputs {
  static constexpr const char* kQueries = "queries.json";
  static constexpr const char* kEvolution = "evolution.json";
  static constexpr const char* kMeasurements = "measurements.csv";
  static constexpr const char* kScores = "scores.json";
  static constexpr const char* kRunReport = "run_report.json";
  static constexpr const char* kTrendCsv = "trend.csv";
  static constexpr const char* kTrendJson = "trend.json";
};

/// GA on the first source; writes queries.json and evolution.json.
EvolutionReport cmd_evolve(const Workspace& ws);

/// Measures the queries on every source for every period; writes
/// measurements.csv and scores.json.
std::vector<io::ScoreRow> cmd_score(const Workspace& ws, const fs::path& queries_file);

/// Agent run over the measurements of one period (default: the latest);
/// writes run_report.json.
RunResult cmd_combine(const Workspace& ws, const fs::path& measurements_file, std::optional<std::string> period);

struct TrendReport {
  std::vector<io::TrendRow> rows;  // per period, averaged over sources
  TrendLine nov;
  TrendLine rel;
};

/// Linear trends of nov and rel; writes trend.csv and trend.json.
TrendReport cmd_trend(const fs::path& scores_file, const fs::path& output_dir);

/// evolve -> score -> combine -> trend.
void cmd_demo(const Workspace& ws);

}  // namespace innov::app
