#include "innov/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "innov/errors.hpp"
#include "innov/kernels.hpp"

namespace innov::app {

namespace {

[[noreturn]] void config_fail(const std::string& msg) { throw Error(ErrorCode::InvalidConfig, msg); }

template <typename T>
T get(const io::Json& j, const char* key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    config_fail(where + ": field '" + key + "' is missing or has the wrong type");
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() ? p : base / p; }

AnalogyMode parse_analogy(const std::string& s, const std::string& where) {
  if (s == "analogous") return AnalogyMode::Analogous;
  if (s == "exact") return AnalogyMode::Exact;
  config_fail(where + ": field 'frequency_mode' must be 'analogous' or 'exact'");
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  const std::string where = path.string();
  io::Json j;
  try {
    j = io::read_json_file(path);
  } catch (const Error& e) {
    config_fail(e.what());
  }
  if (!j.is_object()) config_fail(where + ": configuration must be a JSON object");
  const fs::path base = path.has_parent_path() ? path.parent_path() : fs::path(".");

  RunConfig cfg;
  cfg.pattern = resolve(base, get<std::string>(j, "pattern", where));
  if (j.contains("output_dir")) cfg.output_dir = resolve(base, get<std::string>(j, "output_dir", where));

  auto parse_source = [&](const io::Json& s, const std::string& id_default) {
    SourceConfig sc;
    sc.id = s.contains("id") ? get<std::string>(s, "id", where) : id_default;
    if (s.contains("alpha")) sc.reliability = get<double>(s, "alpha", where);
    sc.corpus = resolve(base, get<std::string>(s, "corpus", where));
    if (s.contains("query_log")) sc.query_log = resolve(base, get<std::string>(s, "query_log", where));
    if (s.contains("frequency_mode")) sc.analogy = parse_analogy(get<std::string>(s, "frequency_mode", where), where);
    if (!(sc.reliability >= 0.0 && sc.reliability <= 1.0)) {
      config_fail(where + ": source '" + sc.id + "' alpha must lie in [0,1]");
    }
    return sc;
  };
  if (j.contains("sources")) {
    const auto& list = j.at("sources");
    if (!list.is_array() || list.empty()) config_fail(where + ": 'sources' must be a non-empty array");
    for (std::size_t i = 0; i < list.size(); ++i) cfg.sources.push_back(parse_source(list[i], "source" + std::to_string(i + 1)));
  } else if (j.contains("corpus")) {
    cfg.sources.push_back(parse_source(j, "corpus"));
  } else {
    config_fail(where + ": needs 'sources' or 'corpus'");
  }
  std::set<std::string> ids;
  for (const auto& s : cfg.sources) {
    if (!ids.insert(s.id).second) config_fail(where + ": duplicate source id '" + s.id + "'");
  }

  try {
    if (j.contains("ga")) cfg.ga = io::ga_config_from_json(j.at("ga"), cfg.ga);
    if (j.contains("seed")) cfg.ga.rng_seed = get<std::uint64_t>(j, "seed", where);
    validate(cfg.ga);
  } catch (const Error& e) {
    config_fail(where + ": ga: " + e.what());
  }
  if (j.contains("frame")) {
    const auto& f = j.at("frame");
    cfg.frame_k = get<int>(f, "k", where + ": frame");
    if (f.contains("labels")) cfg.frame_labels = get<std::vector<std::string>>(f, "labels", where + ": frame");
  }
  if (j.contains("band")) cfg.band_fraction = get<double>(j, "band", where);
  if (j.contains("thresholds")) {
    const auto& t = j.at("thresholds");
    if (t.contains("nov")) cfg.thresholds.nov_star = get<double>(t, "nov", where + ": thresholds");
    if (t.contains("rel")) cfg.thresholds.rel_star = get<double>(t, "rel", where + ": thresholds");
  }
  if (j.contains("periods")) {
    const auto& p = j.at("periods");
    cfg.period_from = get<int>(p, "from", where + ": periods");
    cfg.period_to = get<int>(p, "to", where + ": periods");
    if (*cfg.period_from > *cfg.period_to) config_fail(where + ": periods.from is after periods.to");
  }
  return cfg;
}

std::vector<const SourceAdapter*> Workspace::adapters() const {
  std::vector<const SourceAdapter*> out;
  for (const auto& s : sources) out.push_back(s.get());
  return out;
}

std::vector<int> Workspace::periods() const {
  if (config.period_from && config.period_to) {
    std::vector<int> out;
    for (int y = *config.period_from; y <= *config.period_to; ++y) out.push_back(y);
    return out;
  }
  int latest = 0;
  for (const auto& s : sources) {
    if (const auto d = s->latest_date()) latest = std::max(latest, d->year);
  }
  return {latest};
}

Workspace open_workspace(RunConfig config) {
  auto guarded = [](const fs::path& file, auto&& fn) {
    if (!fs::exists(file)) config_fail(file.string() + ": file not found");
    try {
      return fn();
    } catch (const Error& e) {
      config_fail(file.string() + ": " + e.what());
    }
  };

  SearchPattern pattern = guarded(config.pattern, [&] { return io::pattern_from_json(io::read_json_file(config.pattern)); });
  Frame frame = [&] {
    try {
      return config.frame_labels.empty() ? make_frame(config.frame_k) : make_frame(config.frame_k, config.frame_labels);
    } catch (const Error& e) {
      config_fail(std::string("frame: ") + e.what());
    }
  }();
  try {
    validate(config.thresholds);
  } catch (const Error& e) {
    config_fail(e.what());
  }
  if (!(config.band_fraction >= 0.0 && config.band_fraction < 0.5)) config_fail("band must lie in [0, 0.5)");

  std::vector<std::unique_ptr<OfflineCorpusSource>> sources;
  for (const auto& sc : config.sources) {
    auto docs = guarded(sc.corpus, [&] { return io::read_corpus(sc.corpus); });
    auto src = guarded(sc.corpus, [&] {
      return std::make_unique<OfflineCorpusSource>(build_index(docs, SourceProfile{sc.id, sc.reliability}));
    });
    if (sc.query_log) {
      auto log = guarded(*sc.query_log, [&] {
        std::ifstream in(*sc.query_log);
        return io::read_query_log(in);
      });
      src->attach_query_log(std::move(log), sc.analogy);
    }
    sources.push_back(std::move(src));
  }
  return Workspace{std::move(config), std::move(pattern), std::move(frame), std::move(sources)};
}

EvolutionReport cmd_evolve(const Workspace& ws) {
  EvolutionReport report = evolve(ws.pattern, *ws.sources.front(), ws.config.ga);
  io::write_json_file(ws.config.output_dir / Outputs::kQueries, io::queries_json(report, ws.pattern));
  io::write_json_file(ws.config.output_dir / Outputs::kEvolution, io::evolution_json(report, ws.pattern, ws.config.ga));
  return report;
}

std::vector<io::ScoreRow> cmd_score(const Workspace& ws, const fs::path& queries_file) {
  std::vector<Query> queries;
  try {
    queries = io::queries_from_json(io::read_json_file(queries_file), ws.pattern);
  } catch (const Error& e) {
    config_fail(queries_file.string() + ": " + e.what());
  }

  std::vector<MeasurementBatch> batches;
  for (const auto& src : ws.sources) {
    for (int year : ws.periods()) batches.push_back(measure(*src, ws.pattern, queries, year));
  }
  const auto scores = kernels::score_batches_parallel(batches);
  std::vector<io::ScoreRow> rows;
  for (std::size_t i = 0; i < batches.size(); ++i) rows.push_back(io::score_row(batches[i], scores[i]));

  std::ostringstream csv;
  io::write_measurements(csv, batches);
  io::write_text_file(ws.config.output_dir / Outputs::kMeasurements, csv.str());
  io::write_json_file(ws.config.output_dir / Outputs::kScores, io::to_json(rows));
  return rows;
}

RunResult cmd_combine(const Workspace& ws, const fs::path& measurements_file, std::optional<std::string> period) {
  std::vector<MeasurementBatch> batches;
  {
    std::ifstream in(measurements_file);
    if (!in) config_fail(measurements_file.string() + ": file not found");
    try {
      batches = io::read_measurements(in);
    } catch (const Error& e) {
      config_fail(measurements_file.string() + ": " + e.what());
    }
  }
  if (batches.empty()) config_fail(measurements_file.string() + ": no measurements");
  if (!period) {
    period = batches.front().period;
    for (const auto& b : batches) {
      if (period_ordinal(b.period) > period_ordinal(*period)) period = b.period;
    }
  }

  std::map<std::string, double> alpha;
  for (const auto& s : ws.config.sources) alpha[s.id] = s.reliability;
  std::vector<AgentInput> inputs;
  for (const auto& b : batches) {
    if (b.period != *period) continue;
    const auto it = alpha.find(b.source_id);
    inputs.push_back({b, SourceProfile{b.source_id, it == alpha.end() ? 1.0 : it->second}});
  }
  if (inputs.empty()) config_fail(measurements_file.string() + ": no measurements for period " + *period);

  RunOptions options;
  options.band_fraction = ws.config.band_fraction;
  options.top_documents = ws.config.ga.top_documents;
  RunResult run = run_agents_on_batches(inputs, ws.frame, ws.config.thresholds, options);
  io::write_json_file(ws.config.output_dir / Outputs::kRunReport,
                      io::run_report_json(run, ws.frame, ws.config.thresholds));
  return run;
}

TrendReport cmd_trend(const fs::path& scores_file, const fs::path& output_dir) {
  std::vector<io::ScoreRow> scores;
  try {
    scores = io::scores_from_json(io::read_json_file(scores_file));
  } catch (const Error& e) {
    config_fail(scores_file.string() + ": " + e.what());
  }

  struct Acc {
    double nov = 0.0;
    double rel = 0.0;
    int n = 0;
  };
  std::map<double, std::pair<std::string, Acc>> by_period;
  for (const auto& s : scores) {
    auto& [label, acc] = by_period[period_ordinal(s.period)];
    label = s.period;
    acc.nov += s.nov;
    acc.rel += s.rel;
    ++acc.n;
  }

  TrendReport report;
  std::vector<TrendPoint> nov;
  std::vector<TrendPoint> rel;
  for (const auto& [x, entry] : by_period) {
    const auto& [label, acc] = entry;
    report.rows.push_back({label, acc.nov / acc.n, acc.rel / acc.n});
    nov.push_back({x, acc.nov / acc.n});
    rel.push_back({x, acc.rel / acc.n});
  }
  if (report.rows.size() < 2) {
    throw Error(ErrorCode::DegenerateSeries, scores_file.string() + ": trend needs at least two periods");
  }
  report.nov = trend_fit(nov);
  report.rel = trend_fit(rel);

  std::ostringstream csv;
  io::write_trend_csv(csv, report.rows);
  io::write_text_file(output_dir / Outputs::kTrendCsv, csv.str());
  auto line = [](const TrendLine& t) { return io::Json{{"slope", t.slope}, {"intercept", t.intercept}, {"n", t.n}}; };
  io::write_json_file(output_dir / Outputs::kTrendJson, {{"nov", line(report.nov)}, {"rel", line(report.rel)}});
  return report;
}

void cmd_demo(const Workspace& ws) {
  cmd_evolve(ws);
  const fs::path out = ws.config.output_dir;
  cmd_score(ws, out / Outputs::kQueries);
  cmd_combine(ws, out / Outputs::kMeasurements, std::nullopt);
  cmd_trend(out / Outputs::kScores, out);
}

}  // namespace innov::app
