#include "innov/formats.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "innov/errors.hpp"

namespace innov::io {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ParseError, msg); }

template <typename T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    parse_fail(std::string("field '") + key + "' has the wrong type");
  }
}

std::uint64_t parse_count(std::string_view text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) parse_fail("bad count '" + std::string(text) + "'");
  return v;
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) parse_fail("bad integer '" + std::string(text) + "'");
  return v;
}

void expect_header(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& header,
                   const char* what) {
  if (rows.empty() || rows.front() != header) {
    std::string h;
    for (const auto& c : header) h += (h.empty() ? "" : ",") + c;
    parse_fail(std::string(what) + " CSV must start with header '" + h + "'");
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) parse_fail("bad number '" + std::string(text) + "'");
  return v;
}

Json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    parse_fail(path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidConfig, "cannot write " + path.string());
  out << text;
}

void write_json_file(const fs::path& path, const Json& json) { write_text_file(path, json.dump(2) + "\n"); }

Json to_json(const MassFunction& m) {
  Json masses = Json::array();
  for (const auto& e : m.focal()) masses.push_back({{"set", e.set.indices()}, {"m", e.mass}});
  return {{"k", m.frame().size()}, {"labels", m.frame().labels()}, {"masses", std::move(masses)}};
}

MassFunction mass_from_json(const Json& j) {
  const int k = field<int>(j, "k");
  const Frame frame = j.contains("labels") ? make_frame(k, field<std::vector<std::string>>(j, "labels")) : make_frame(k);
  std::vector<FocalElement> assignments;
  for (const auto& e : field<Json>(j, "masses")) {
    const auto set = field<std::vector<int>>(e, "set");
    if (set.empty()) throw Error(ErrorCode::EmptyFocal, "focal set is empty");
    assignments.push_back({FocalSet::of(set), field<double>(e, "m")});
  }
  return make_mass(frame, assignments);
}

Json to_json(const BeliefSummary& s, const Frame& frame) {
  Json out = Json::array();
  for (std::size_t i = 0; i < s.singletons.size(); ++i) {
    out.push_back({{"interval", i + 1},
                   {"label", frame.labels().at(i)},
                   {"bel", s.singletons[i].bel},
                   {"pl", s.singletons[i].pl}});
  }
  return out;
}

Json to_json(const SearchPattern& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms) {
    terms.push_back({{"text", t.text}, {"class", std::string(to_string(t.term_class))}, {"weight", t.weight}});
  }
  return {{"name", p.name}, {"marker", p.marker}, {"terms", std::move(terms)}};
}

SearchPattern pattern_from_json(const Json& j) {
  SearchPattern p;
  p.name = field<std::string>(j, "name");
  p.marker = field<std::string>(j, "marker");
  for (const auto& t : field<Json>(j, "terms")) {
    Term term;
    term.text = field<std::string>(t, "text");
    term.term_class = parse_term_class(field<std::string>(t, "class"));
    if (t.contains("weight")) term.weight = field<double>(t, "weight");
    p.terms.push_back(std::move(term));
  }
  return normalized(std::move(p));
}

GAConfig ga_config_from_json(const Json& j, GAConfig cfg) {
  if (!j.is_object()) parse_fail("GA configuration must be an object");
  auto take = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = field<std::remove_reference_t<decltype(slot)>>(j, key);
  };
  take("population_size", cfg.population_size);
  take("generations", cfg.generations);
  take("crossover_rate", cfg.crossover_rate);
  take("elitism", cfg.elitism);
  take("tournament_size", cfg.tournament_size);
  take("top_m", cfg.top_m);
  take("top_documents", cfg.top_documents);
  take("stagnation_limit", cfg.stagnation_limit);
  take("rng_seed", cfg.rng_seed);
  take("parallel", cfg.parallel);
  if (j.contains("mutation_rate") && !j.at("mutation_rate").is_null()) {
    cfg.mutation_rate = field<double>(j, "mutation_rate");
  }
  return cfg;
}

Json to_json(const GAConfig& cfg, std::size_t vocabulary) {
  return {{"population_size", cfg.population_size},
          {"generations", cfg.generations},
          {"crossover_rate", cfg.crossover_rate},
          {"mutation_rate", cfg.effective_mutation_rate(vocabulary)},
          {"elitism", cfg.elitism},
          {"tournament_size", cfg.tournament_size},
          {"top_m", cfg.top_m},
          {"top_documents", cfg.top_documents},
          {"stagnation_limit", cfg.stagnation_limit},
          {"rng_seed", cfg.rng_seed}};
}

Json queries_json(const EvolutionReport& report, const SearchPattern& pattern) {
  Json queries = Json::array();
  for (const auto& q : report.best_queries) {
    queries.push_back({{"mask", q.mask.to_string()},
                       {"terms", q.query.terms},
                       {"text", q.query.text()},
                       {"fitness", q.fitness},
                       {"multiplicity", q.multiplicity}});
  }
  return {{"pattern", pattern.name}, {"marker", pattern.marker}, {"queries", std::move(queries)}};
}

std::vector<Query> queries_from_json(const Json& j, const SearchPattern& pattern) {
  std::vector<Query> out;
  for (const auto& q : field<Json>(j, "queries")) {
    Query query{pattern.marker, {}};
    for (const auto& t : field<std::vector<std::string>>(q, "terms")) {
      const std::string text = normalize_phrase(t);
      const bool known = std::any_of(pattern.terms.begin(), pattern.terms.end(),
                                     [&](const Term& term) { return term.text == text; });
      if (!known) parse_fail("query term '" + t + "' is not in pattern '" + pattern.name + "'");
      query.terms.push_back(text);
    }
    if (std::find(out.begin(), out.end(), query) == out.end()) out.push_back(std::move(query));
  }
  if (out.empty()) parse_fail("queries file lists no queries");
  return out;
}

Json evolution_json(const EvolutionReport& report, const SearchPattern& pattern, const GAConfig& cfg) {
  Json gens = Json::array();
  for (const auto& g : report.generations) {
    gens.push_back({{"generation", g.generation}, {"best", g.best}, {"mean", g.mean}});
  }
  return {{"pattern", pattern.name},
          {"config", to_json(cfg, pattern.terms.size())},
          {"evaluations", report.evaluations},
          {"stopped_early", report.stopped_early},
          {"generations", std::move(gens)}};
}

ScoreRow score_row(const MeasurementBatch& batch, const InnovationScore& score) {
  return {batch.source_id, batch.period, score.nov, score.rel, score.nov_raw, score.rel_raw};
}

Json to_json(std::span<const ScoreRow> rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    out.push_back({{"source", r.source},
                   {"period", r.period},
                   {"nov", r.nov},
                   {"rel", r.rel},
                   {"nov_raw", r.nov_raw},
                   {"rel_raw", r.rel_raw}});
  }
  return out;
}

std::vector<ScoreRow> scores_from_json(const Json& j) {
  if (!j.is_array()) parse_fail("scores must be a JSON array");
  std::vector<ScoreRow> rows;
  for (const auto& r : j) {
    rows.push_back({field<std::string>(r, "source"), field<std::string>(r, "period"), field<double>(r, "nov"),
                    field<double>(r, "rel"), field<double>(r, "nov_raw"), field<double>(r, "rel_raw")});
  }
  return rows;
}

Json run_report_json(const RunResult& run, const Frame& frame, const Thresholds& th) {
  Json agents = Json::array();
  for (const auto& a : run.agents) {
    Json utility = {{"best_query_fitness", nullptr}, {"conflict_with_combined", a.utility.conflict_with_combined}};
    if (a.utility.best_query_fitness) utility["best_query_fitness"] = *a.utility.best_query_fitness;
    agents.push_back({{"id", a.agent_id},
                      {"period", a.batch.period},
                      {"nov", a.score.nov},
                      {"rel", a.score.rel},
                      {"nov_raw", a.score.nov_raw},
                      {"rel_raw", a.score.rel_raw},
                      {"F", a.F},
                      {"nov_mass", to_json(a.nov_mass)},
                      {"rel_mass", to_json(a.rel_mass)},
                      {"utility", std::move(utility)}});
  }
  Json anomalies = Json::array();
  for (const auto& r : run.registry) {
    anomalies.push_back({{"agent_id", r.agent_id},
                         {"trigger", std::string(to_string(r.trigger))},
                         {"value", r.value},
                         {"threshold", r.threshold},
                         {"period", r.period}});
  }
  auto combined = [&](const IndicatorEvidence& e) {
    return Json{{"mass", to_json(e.group.combined)}, {"summary", to_json(e.summary, frame)}};
  };
  return {{"thresholds", {{"nov", th.nov_star}, {"rel", th.rel_star}}},
          {"agents", std::move(agents)},
          {"anomalies", std::move(anomalies)},
          {"combined", {{"nov", combined(run.nov)}, {"rel", combined(run.rel)}}},
          {"conflict_per_step", {{"nov", run.nov.group.step_conflicts}, {"rel", run.rel.group.step_conflicts}}}};
}

std::vector<std::vector<std::string>> read_csv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          cell += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        row.push_back(std::move(cell));
        cell.clear();
      } else {
        cell += c;
      }
    }
    if (quoted) parse_fail("unterminated quote in CSV line '" + line + "'");
    row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CorpusDocument> read_corpus_jsonl(std::istream& in) {
  std::vector<CorpusDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      docs.push_back({field<std::string>(j, "id"), Date::parse(field<std::string>(j, "date")),
                      field<std::string>(j, "text")});
    } catch (const nlohmann::json::exception& e) {
      parse_fail("corpus line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      parse_fail("corpus line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

void write_corpus_jsonl(std::ostream& out, std::span<const CorpusDocument> corpus) {
  for (const auto& d : corpus) out << Json{{"id", d.id}, {"date", d.date.iso()}, {"text", d.text}}.dump() << '\n';
}

std::vector<CorpusDocument> read_corpus(const fs::path& path) {
  if (fs::is_directory(path)) {
    std::ifstream meta(path / "meta.csv");
    if (!meta) parse_fail("corpus directory " + path.string() + " has no meta.csv");
    const auto rows = read_csv(meta);
    expect_header(rows, {"file", "date"}, "meta");
    std::vector<CorpusDocument> docs;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() != 2) parse_fail("meta.csv row " + std::to_string(i + 1) + " needs 2 fields");
      std::ifstream body(path / rows[i][0], std::ios::binary);
      if (!body) parse_fail("cannot open corpus file " + (path / rows[i][0]).string());
      std::ostringstream text;
      text << body.rdbuf();
      docs.push_back({fs::path(rows[i][0]).stem().string(), Date::parse(rows[i][1]), text.str()});
    }
    return docs;
  }
  std::ifstream in(path);
  if (!in) parse_fail("cannot open corpus " + path.string());
  return read_corpus_jsonl(in);
}

std::vector<QueryLogEntry> read_query_log(std::istream& in) {
  const auto rows = read_csv(in);
  expect_header(rows, {"period", "query", "frequency"}, "query log");
  std::vector<QueryLogEntry> log;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) parse_fail("query log row " + std::to_string(i + 1) + " needs 3 fields");
    log.push_back(make_log_entry(parse_int(rows[i][0]), rows[i][1], parse_double(rows[i][2])));
  }
  return log;
}

void write_query_log(std::ostream& out, std::span<const QueryLogEntry> log) {
  out << "period,query,frequency\n";
  for (const auto& e : log) {
    std::string text;
    for (const auto& t : e.tokens) text += (text.empty() ? "" : " ") + t;
    out << e.period << ',' << csv_field(text) << ',' << format_double(e.frequency) << '\n';
  }
}

void write_measurements(std::ostream& out, std::span<const MeasurementBatch> batches) {
  out << "source,period,query_id,R,F\n";
  for (const auto& b : batches) {
    const std::string prefix = csv_field(b.source_id) + ',' + csv_field(b.period) + ',';
    out << prefix << kMarkerRow << ',' << b.marker_hits << ',' << format_double(b.marker_frequency) << '\n';
    for (const auto& q : b.queries) {
      out << prefix << csv_field(q.query_id) << ',' << q.hits << ',' << format_double(q.frequency) << '\n';
    }
  }
}

std::vector<MeasurementBatch> read_measurements(std::istream& in) {
  const auto rows = read_csv(in);
  expect_header(rows, {"source", "period", "query_id", "R", "F"}, "measurement");
  std::vector<MeasurementBatch> batches;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::vector<bool> has_marker;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 5) parse_fail("measurement row " + std::to_string(i + 1) + " needs 5 fields");
    auto [it, inserted] = index.try_emplace({r[0], r[1]}, batches.size());
    if (inserted) {
      batches.push_back({r[0], r[1], {}, 0, 0.0});
      has_marker.push_back(false);
    }
    MeasurementBatch& b = batches[it->second];
    if (r[2] == kMarkerRow) {
      if (has_marker[it->second]) parse_fail("duplicate marker row for " + r[0] + "/" + r[1]);
      has_marker[it->second] = true;
      b.marker_hits = parse_count(r[3]);
      b.marker_frequency = parse_double(r[4]);
    } else {
      b.queries.push_back({r[2], parse_count(r[3]), parse_double(r[4])});
    }
  }
  for (std::size_t i = 0; i < batches.size(); ++i) {
    if (!has_marker[i]) {
      parse_fail("no __marker__ row for " + batches[i].source_id + "/" + batches[i].period);
    }
  }
  return batches;
}

void write_trend_csv(std::ostream& out, std::span<const TrendRow> rows) {
  out << "period,nov,rel\n";
  for (const auto& r : rows) out << csv_field(r.period) << ',' << format_double(r.nov) << ',' << format_double(r.rel) << '\n';
}

std::vector<TrendRow> read_trend_csv(std::istream& in) {
  const auto rows = read_csv(in);
  expect_header(rows, {"period", "nov", "rel"}, "trend");
  std::vector<TrendRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) parse_fail("trend row " + std::to_string(i + 1) + " needs 3 fields");
    out.push_back({rows[i][0], parse_double(rows[i][1]), parse_double(rows[i][2])});
  }
  return out;
}

}  // namespace innov::io
