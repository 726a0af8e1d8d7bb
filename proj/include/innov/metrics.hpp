#pragma once

// Novelty (Nov) and demand (Rel) indicators computed from hit counts and
// query frequencies relative to the marker-only query.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "innov/evidence.hpp"

namespace innov {

enum class Indicator { Novelty, Demand };

std::string_view to_string(Indicator indicator) noexcept;

/// 1 - mean_k [1 - exp(1 - R_k/R0)]. Lies in [1, e] when every R_k <= R0.
double novelty_raw(std::span<const std::uint64_t> hits, std::uint64_t marker_hits);

/// mean_k [1 - exp(1 - F_k/F0)]. Lies in [1-e, 0] when every F_k <= F0.
double demand_raw(std::span<const double> frequencies, double marker_frequency);

/// Affine map of a raw indicator onto [0,1], clamped.
double normalize_score(double raw, Indicator indicator);

/// Normalized single-query term: decreasing in x for Novelty, increasing for
/// Demand.
double per_query_contribution(double x, double x0, Indicator indicator);

struct QueryMeasurement {
  std::string query_id;
  std::uint64_t hits = 0;  // R_k
  double frequency = 0.0;  // F_k
};

struct MeasurementBatch {
  std::string source_id;
  std::string period;
  std::vector<QueryMeasurement> queries;
  std::uint64_t marker_hits = 0;  // R0
  double marker_frequency = 0.0;  // F0
};

/// Throws MarkerNotFound / EmptyBatch / OutOfRange on a malformed batch.
void validate(const MeasurementBatch& batch);

struct InnovationScore {
  double nov_raw = 0.0;
  double rel_raw = 0.0;
  double nov = 0.0;
  double rel = 0.0;
  std::vector<double> per_query_nov;
  std::vector<double> per_query_rel;
};

InnovationScore score_object(const MeasurementBatch& batch);

inline constexpr double kDefaultBoundaryBand = 0.1;

/// Bins per-query contributions into the frame. A value closer than
/// band_fraction * width to an interior edge lands on the union of the two
/// neighbouring intervals. Masses are relative frequencies.
MassFunction contributions_to_mass(std::span<const double> contributions, const Frame& frame,
                                   double band_fraction = kDefaultBoundaryBand);

struct TrendPoint {
  double period;
  double value;
};

struct TrendLine {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t n = 0;

  double at(double period) const noexcept { return intercept + slope * period; }
};

/// Ordinary least squares over (period, value).
TrendLine trend_fit(std::span<const TrendPoint> series);

/// Numeric position of a period label: "2017" -> 2017, "2017-07-02" -> 2017.5.
double period_ordinal(std::string_view period);

}  // namespace innov
