#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "innov/errors.hpp"
#include "innov/metrics.hpp"
#include "oracles.hpp"

using namespace innov;

namespace {

constexpr double kE = std::numbers::e;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an innov::Error");
  return ErrorCode::ParseError;
}

MeasurementBatch batch_of(std::vector<std::uint64_t> hits, std::vector<double> freqs, std::uint64_t r0, double f0) {
  MeasurementBatch b{"src", "2017", {}, r0, f0};
  for (std::size_t i = 0; i < hits.size(); ++i) b.queries.push_back({"q" + std::to_string(i), hits[i], freqs[i]});
  return b;
}

}  // namespace

TEST_CASE("novelty_raw") {
  const std::vector<std::uint64_t> at_marker{250};
  CHECK(novelty_raw(at_marker, 250) == 1.0);
  const std::vector<std::uint64_t> none{0};
  CHECK(novelty_raw(none, 250) == doctest::Approx(kE).epsilon(1e-15));
  const std::vector<std::uint64_t> mixed{0, 40};
  CHECK(novelty_raw(mixed, 40) == doctest::Approx(1.8591409142295225).epsilon(1e-14));

  CHECK(code_of([&] { novelty_raw(mixed, 0); }) == ErrorCode::MarkerNotFound);
  CHECK(code_of([] { novelty_raw({}, 5); }) == ErrorCode::EmptyBatch);
}

TEST_CASE("demand_raw") {
  const std::vector<double> at_marker{12.5};
  CHECK(demand_raw(at_marker, 12.5) == 0.0);
  const std::vector<double> none{0.0};
  CHECK(demand_raw(none, 12.5) == doctest::Approx(1.0 - kE).epsilon(1e-15));
  const std::vector<double> half{6.25};
  CHECK(demand_raw(half, 12.5) == doctest::Approx(-0.6487212707001282).epsilon(1e-14));

  CHECK(code_of([&] { demand_raw(half, 0.0); }) == ErrorCode::MarkerNotFound);
  CHECK(code_of([&] { demand_raw(half, -1.0); }) == ErrorCode::MarkerNotFound);
  CHECK(code_of([] { demand_raw({}, 1.0); }) == ErrorCode::EmptyBatch);
}

TEST_CASE("normalize_score") {
  CHECK(normalize_score(kE, Indicator::Novelty) == 1.0);
  CHECK(normalize_score(1.0, Indicator::Novelty) == 0.0);
  CHECK(normalize_score(-0.648721271, Indicator::Demand) == doctest::Approx(0.622459331).epsilon(1e-9));
  CHECK(normalize_score(5.0, Indicator::Novelty) == 1.0);
  CHECK(normalize_score(-5.0, Indicator::Demand) == 0.0);
  CHECK(normalize_score(0.0, Indicator::Demand) == 1.0);
}

TEST_CASE("per_query_contribution") {
  CHECK(per_query_contribution(0.0, 80.0, Indicator::Novelty) == 1.0);
  CHECK(per_query_contribution(80.0, 80.0, Indicator::Novelty) == 0.0);
  CHECK(per_query_contribution(40.0, 80.0, Indicator::Novelty) == doctest::Approx(0.3775406687981455).epsilon(1e-14));
  CHECK(per_query_contribution(40.0, 80.0, Indicator::Demand) == doctest::Approx(1.0 - 0.3775406687981455).epsilon(1e-14));
  CHECK(per_query_contribution(200.0, 80.0, Indicator::Novelty) == 0.0);
  CHECK(code_of([] { per_query_contribution(1.0, 0.0, Indicator::Novelty); }) == ErrorCode::MarkerNotFound);
  CHECK(code_of([] { per_query_contribution(-1.0, 1.0, Indicator::Demand); }) == ErrorCode::OutOfRange);
}

TEST_CASE("score_object composes the indicators") {
  const auto same = score_object(batch_of({30}, {7.0}, 30, 7.0));
  CHECK(same.nov == 0.0);
  CHECK(same.rel == 1.0);

  const auto fresh = score_object(batch_of({0}, {0.0}, 30, 7.0));
  CHECK(fresh.nov == 1.0);
  CHECK(fresh.rel == 0.0);

  const auto two = score_object(batch_of({0, 30}, {0.0, 7.0}, 30, 7.0));
  CHECK(two.nov == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(two.per_query_nov == std::vector<double>{1.0, 0.0});
  CHECK(two.per_query_rel == std::vector<double>{0.0, 1.0});

  CHECK(code_of([] { score_object(batch_of({1}, {1.0}, 0, 1.0)); }) == ErrorCode::MarkerNotFound);
  CHECK(code_of([] { score_object(batch_of({}, {}, 3, 1.0)); }) == ErrorCode::EmptyBatch);
}

TEST_CASE("normalized score equals the mean of per-query contributions") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::uint64_t r0 = 1 + rng.below(1000);
    const double f0 = rng.uniform(0.5, 100.0);
    std::vector<std::uint64_t> hits;
    std::vector<double> freqs;
    const auto n = 1 + rng.below(12);
    for (std::uint64_t i = 0; i < n; ++i) {
      hits.push_back(rng.below(r0 + 1));
      freqs.push_back(rng.uniform(0.0, f0));
    }
    const auto s = score_object(batch_of(hits, freqs, r0, f0));
    double nov = 0.0;
    double rel = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nov += s.per_query_nov[i];
      rel += s.per_query_rel[i];
    }
    CHECK(s.nov == doctest::Approx(nov / n).epsilon(1e-12));
    CHECK(s.rel == doctest::Approx(rel / n).epsilon(1e-12));
  }
}

TEST_CASE("contributions_to_mass bins with a boundary band") {
  const Frame f = make_frame(2, {"absent", "present"});
  const std::vector<double> spread{0.1, 0.2, 0.8, 0.9};
  const auto m = contributions_to_mass(spread, f);
  CHECK(m.size() == 2);
  CHECK(m.mass(FocalSet::of({1})) == 0.5);
  CHECK(m.mass(FocalSet::of({2})) == 0.5);

  const std::vector<double> same{0.3, 0.3};
  CHECK(contributions_to_mass(same, f).mass(FocalSet::of({1})) == 1.0);
  const std::vector<double> ten(10, 0.2);
  CHECK(contributions_to_mass(ten, f).mass(FocalSet::of({1})) == 1.0);

  const std::vector<double> edge{0.49};
  CHECK(contributions_to_mass(edge, f).mass(FocalSet::of({1, 2})) == 1.0);
  const std::vector<double> upper_edge{0.52};
  CHECK(contributions_to_mass(upper_edge, f).mass(FocalSet::of({1, 2})) == 1.0);
  // The frame's outer edges are not interior boundaries.
  const std::vector<double> ends{0.0, 1.0};
  const auto e = contributions_to_mass(ends, f);
  CHECK(e.mass(FocalSet::of({1})) == 0.5);
  CHECK(e.mass(FocalSet::of({2})) == 0.5);

  const std::vector<double> no_band{0.49};
  CHECK(contributions_to_mass(no_band, f, 0.0).mass(FocalSet::of({1})) == 1.0);

  CHECK(code_of([&] { contributions_to_mass({}, f); }) == ErrorCode::EmptyBatch);
  const std::vector<double> bad{1.2};
  CHECK(code_of([&] { contributions_to_mass(bad, f); }) == ErrorCode::OutOfRange);
}

TEST_CASE("property: contributions_to_mass always yields a normalized mass") {
  Rng rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const Frame f = make_frame(2 + static_cast<int>(rng.below(6)));
    std::vector<double> v(1 + rng.below(25));
    for (auto& x : v) x = rng.uniform();
    const auto m = contributions_to_mass(v, f);
    double total = 0.0;
    for (const auto& e : m.focal()) {
      CHECK(e.mass > 0.0);
      CHECK(e.set.size() <= 2);
      total += e.mass;
    }
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

TEST_CASE("trend_fit") {
  const std::vector<TrendPoint> line{{0, 1.0}, {1, 0.8}, {2, 0.6}};
  const auto t = trend_fit(line);
  CHECK(t.slope == doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(t.intercept == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t.n == 3);

  const std::vector<TrendPoint> flat{{2000, 0.4}, {2001, 0.4}, {2002, 0.4}};
  CHECK(trend_fit(flat).slope == 0.0);

  const std::vector<TrendPoint> single{{2000, 0.4}};
  CHECK(code_of([&] { trend_fit(single); }) == ErrorCode::DegenerateSeries);
  const std::vector<TrendPoint> stacked{{2000, 0.4}, {2000, 0.5}};
  CHECK(code_of([&] { trend_fit(stacked); }) == ErrorCode::DegenerateSeries);
}

TEST_CASE("property: trend_fit matches the normal-equations oracle") {
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 2 + rng.below(30);
    std::vector<TrendPoint> pts;
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::uint64_t i = 0; i < n; ++i) {
      const double x = 2000.0 + static_cast<double>(i);
      const double y = rng.uniform();
      pts.push_back({x, y});
      xs.push_back(x - 2000.0);
      ys.push_back(y);
    }
    const auto t = trend_fit(pts);
    const auto [slope, intercept] = oracle::ols(xs, ys);
    CHECK(std::abs(t.slope - slope) <= 1e-9);
    CHECK(std::abs(t.at(2000.0) - intercept) <= 1e-9);
  }
}

TEST_CASE("period_ordinal") {
  CHECK(period_ordinal("2017") == 2017.0);
  CHECK(period_ordinal("2017-01-01") == 2017.0);
  CHECK(period_ordinal("2017-12-31") < 2018.0);
  CHECK(period_ordinal("2017-06-01") > period_ordinal("2017-05-31"));
  CHECK(code_of([] { period_ordinal("17"); }) == ErrorCode::ParseError);
}
