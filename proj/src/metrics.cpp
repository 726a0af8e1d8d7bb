#include "innov/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

#include "innov/errors.hpp"

namespace innov {

namespace {

constexpr double kE = std::numbers::e;

// 1 - exp(1 - ratio), the bracketed term shared by both indicators.
double bracket(double ratio) { return 1.0 - std::exp(1.0 - ratio); }

}  // namespace

std::string_view to_string(Indicator indicator) noexcept {
  return indicator == Indicator::Novelty ? "nov" : "rel";
}

double novelty_raw(std::span<const std::uint64_t> hits, std::uint64_t marker_hits) {
  if (hits.empty()) throw Error(ErrorCode::EmptyBatch, "no query hit counts");
  if (marker_hits == 0) throw Error(ErrorCode::MarkerNotFound, "marker-only query found no documents");
  const double r0 = static_cast<double>(marker_hits);
  double sum = 0.0;
  for (std::uint64_t r : hits) sum += bracket(static_cast<double>(r) / r0);
  return 1.0 - sum / static_cast<double>(hits.size());
}

double demand_raw(std::span<const double> frequencies, double marker_frequency) {
  if (frequencies.empty()) throw Error(ErrorCode::EmptyBatch, "no query frequencies");
  if (!(marker_frequency > 0.0)) throw Error(ErrorCode::MarkerNotFound, "marker-only query has zero frequency");
  double sum = 0.0;
  for (double f : frequencies) {
    if (!(f >= 0.0)) throw Error(ErrorCode::OutOfRange, "negative query frequency");
    sum += bracket(f / marker_frequency);
  }
  return sum / static_cast<double>(frequencies.size());
}

double normalize_score(double raw, Indicator indicator) {
  const double shifted = indicator == Indicator::Novelty ? raw - 1.0 : raw + kE - 1.0;
  return std::clamp(shifted / (kE - 1.0), 0.0, 1.0);
}

double per_query_contribution(double x, double x0, Indicator indicator) {
  if (!(x0 > 0.0)) throw Error(ErrorCode::MarkerNotFound, "marker baseline must be positive");
  if (!(x >= 0.0)) throw Error(ErrorCode::OutOfRange, "measurement must be non-negative");
  const double novelty = (std::exp(1.0 - x / x0) - 1.0) / (kE - 1.0);
  return std::clamp(indicator == Indicator::Novelty ? novelty : 1.0 - novelty, 0.0, 1.0);
}

void validate(const MeasurementBatch& batch) {
  if (batch.queries.empty()) {
    throw Error(ErrorCode::EmptyBatch, "batch " + batch.source_id + "/" + batch.period + " has no queries");
  }
  if (batch.marker_hits == 0) {
    throw Error(ErrorCode::MarkerNotFound,
                "marker not found in source '" + batch.source_id + "' for period " + batch.period);
  }
  if (!(batch.marker_frequency > 0.0)) {
    throw Error(ErrorCode::MarkerNotFound,
                "marker frequency is zero in source '" + batch.source_id + "' for period " + batch.period);
  }
}

InnovationScore score_object(const MeasurementBatch& batch) {
  validate(batch);
  std::vector<std::uint64_t> hits;
  std::vector<double> freqs;
  hits.reserve(batch.queries.size());
  freqs.reserve(batch.queries.size());
  for (const auto& q : batch.queries) {
    hits.push_back(q.hits);
    freqs.push_back(q.frequency);
  }

  InnovationScore s;
  s.nov_raw = novelty_raw(hits, batch.marker_hits);
  s.rel_raw = demand_raw(freqs, batch.marker_frequency);
  s.nov = normalize_score(s.nov_raw, Indicator::Novelty);
  s.rel = normalize_score(s.rel_raw, Indicator::Demand);
  const double r0 = static_cast<double>(batch.marker_hits);
  s.per_query_nov.reserve(hits.size());
  s.per_query_rel.reserve(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    s.per_query_nov.push_back(per_query_contribution(static_cast<double>(hits[i]), r0, Indicator::Novelty));
    s.per_query_rel.push_back(per_query_contribution(freqs[i], batch.marker_frequency, Indicator::Demand));
  }
  return s;
}

MassFunction contributions_to_mass(std::span<const double> contributions, const Frame& frame,
                                   double band_fraction) {
  if (contributions.empty()) throw Error(ErrorCode::EmptyBatch, "no contributions to bin");
  if (!(band_fraction >= 0.0 && band_fraction < 0.5)) {
    throw Error(ErrorCode::OutOfRange, "boundary band fraction must be in [0, 0.5)");
  }
  const auto& edges = frame.edges();
  std::map<FocalSet, std::size_t> counts;
  for (double v : contributions) {
    const int i = frame.locate(v);
    FocalSet set = FocalSet::singleton(i);
    // Interior edges adjacent to interval i are edges[i-1] (below) and edges[i] (above).
    if (i > 1) {
      const double eps = band_fraction * std::min(edges[i] - edges[i - 1], edges[i - 1] - edges[i - 2]);
      if (v - edges[i - 1] < eps) set = FocalSet::of({i - 1, i});
    }
    if (i < frame.size()) {
      const double eps = band_fraction * std::min(edges[i] - edges[i - 1], edges[i + 1] - edges[i]);
      if (edges[i] - v < eps) set = FocalSet::from_bits(set.bits() | FocalSet::singleton(i + 1).bits());
    }
    ++counts[set];
  }
  // Relative frequencies computed once per set, so a single bin gets exactly 1.
  const double n = static_cast<double>(contributions.size());
  std::vector<FocalElement> assignments;
  for (const auto& [set, c] : counts) assignments.push_back({set, static_cast<double>(c) / n});
  return make_mass(frame, assignments);
}

TrendLine trend_fit(std::span<const TrendPoint> series) {
  if (series.size() < 2) throw Error(ErrorCode::DegenerateSeries, "trend needs at least two points");
  const double n = static_cast<double>(series.size());
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : series) {
    mean_x += p.period;
    mean_y += p.value;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& p : series) {
    const double dx = p.period - mean_x;
    sxx += dx * dx;
    sxy += dx * (p.value - mean_y);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateSeries, "all periods are equal");
  TrendLine line;
  line.slope = sxy / sxx;
  line.intercept = mean_y - line.slope * mean_x;
  line.n = series.size();
  return line;
}

double period_ordinal(std::string_view period) {
  int year = 0;
  int month = 1;
  int day = 1;
  auto parse = [&](std::string_view field, int& out) {
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
      throw Error(ErrorCode::ParseError, "bad period '" + std::string(period) + "'");
    }
  };
  if (period.size() == 4) {
    parse(period, year);
    return year;
  }
  if (period.size() == 10 && period[4] == '-' && period[7] == '-') {
    parse(period.substr(0, 4), year);
    parse(period.substr(5, 2), month);
    parse(period.substr(8, 2), day);
    return year + ((month - 1) * 31 + (day - 1)) / 372.0;
  }
  throw Error(ErrorCode::ParseError, "bad period '" + std::string(period) + "'");
}

}  // namespace innov
