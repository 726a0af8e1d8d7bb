#pragma once

// File formats: mass functions, patterns, evolution reports, scores and run
// reports as JSON; corpora as JSONL or a text directory; query logs,
// measurements and trends as CSV.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "innov/agents.hpp"
#include "innov/evidence.hpp"
#include "innov/genome.hpp"
#include "innov/metrics.hpp"
#include "innov/pattern.hpp"
#include "innov/sources.hpp"

namespace innov::io {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kMarkerRow = "__marker__";

/// Shortest text that parses back to the same double.
std::string format_double(double value);
double parse_double(std::string_view text);

Json read_json_file(const std::filesystem::path& path);
/// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const Json& json);
void write_text_file(const std::filesystem::path& path, const std::string& text);

// Evidence: {"k", "labels", "masses": [{"set": [1,2], "m": 0.3}]}
Json to_json(const MassFunction& m);
MassFunction mass_from_json(const Json& j);
Json to_json(const BeliefSummary& s, const Frame& frame);

// Pattern: {"name", "marker", "terms": [{"text", "class", "weight"}]}
Json to_json(const SearchPattern& p);
SearchPattern pattern_from_json(const Json& j);

/// Overlays the keys present in `j` onto `base`.
GAConfig ga_config_from_json(const Json& j, GAConfig base = {});
Json to_json(const GAConfig& cfg, std::size_t vocabulary);

/// queries.json: the effective query multiset.
Json queries_json(const EvolutionReport& report, const SearchPattern& pattern);
/// Distinct queries of a queries.json document, in file order.
std::vector<Query> queries_from_json(const Json& j, const SearchPattern& pattern);
/// evolution.json: per-generation statistics.
Json evolution_json(const EvolutionReport& report, const SearchPattern& pattern, const GAConfig& cfg);

struct ScoreRow {
  std::string source;
  std::string period;
  double nov = 0.0;
  double rel = 0.0;
  double nov_raw = 0.0;
  double rel_raw = 0.0;
};

ScoreRow score_row(const MeasurementBatch& batch, const InnovationScore& score);
Json to_json(std::span<const ScoreRow> rows);
std::vector<ScoreRow> scores_from_json(const Json& j);

Json run_report_json(const RunResult& run, const Frame& frame, const Thresholds& th);

std::vector<std::vector<std::string>> read_csv(std::istream& in);

/// JSONL, one {"id","date","text"} per line.
std::vector<CorpusDocument> read_corpus_jsonl(std::istream& in);
void write_corpus_jsonl(std::ostream& out, std::span<const CorpusDocument> corpus);
/// A .jsonl file, or a directory of .txt files listed in meta.csv (file,date).
std::vector<CorpusDocument> read_corpus(const std::filesystem::path& path);

// Query log CSV: period,query,frequency
std::vector<QueryLogEntry> read_query_log(std::istream& in);
void write_query_log(std::ostream& out, std::span<const QueryLogEntry> log);

// Measurement CSV: source,period,query_id,R,F plus one __marker__ row per
// (source, period) carrying R0 and F0.
void write_measurements(std::ostream& out, std::span<const MeasurementBatch> batches);
std::vector<MeasurementBatch> read_measurements(std::istream& in);

struct TrendRow {
  std::string period;
  double nov = 0.0;
  double rel = 0.0;
};

// Trend CSV: period,nov,rel
void write_trend_csv(std::ostream& out, std::span<const TrendRow> rows);
std::vector<TrendRow> read_trend_csv(std::istream& in);

}  // namespace innov::io
