#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "sirmech/core_types.hpp"

using namespace sirmech;

namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorKind::Config;
}

}  // namespace

TEST(ToLog, UnitPointMapsToOrigin) {
  const PhasePoint2 z = to_log(PhasePoint2::direct(1.0, 1.0));
  EXPECT_EQ(z.chart, Chart::Logarithmic);
  EXPECT_EQ(z.q, 0.0);
  EXPECT_EQ(z.p, 0.0);
}

TEST(ToLog, InitialState) {
  const PhasePoint2 z = to_log(PhasePoint2::direct(0.01, 0.99));
  EXPECT_NEAR(z.q, -4.605170185988091, 1e-15);
  EXPECT_NEAR(z.p, -0.010050335853501441, 1e-16);
}

TEST(ToLog, RejectsZeroInfected) {
  EXPECT_EQ(kind_of([] { to_log(PhasePoint2::direct(0.0, 0.5)); }), ErrorKind::NonPositiveCoordinate);
}

TEST(ToLog, RejectsWrongChart) {
  EXPECT_EQ(kind_of([] { to_log(PhasePoint2::logarithmic(0.0, 0.0)); }), ErrorKind::ChartMismatch);
  EXPECT_EQ(kind_of([] { from_log(PhasePoint2::direct(1.0, 1.0)); }), ErrorKind::ChartMismatch);
}

TEST(FromLog, OriginMapsToUnitPoint) {
  const PhasePoint2 z = from_log(PhasePoint2::logarithmic(0.0, 0.0));
  EXPECT_EQ(z.chart, Chart::Direct);
  EXPECT_EQ(z.q, 1.0);
  EXPECT_EQ(z.p, 1.0);
}

TEST(FromLog, InitialState) {
  const PhasePoint2 z = from_log(PhasePoint2::logarithmic(-4.605170186, -0.010050336));
  EXPECT_NEAR(z.q, 0.01, 1e-11);
  EXPECT_NEAR(z.p, 0.99, 1e-9);
  const PhasePoint2 exact = from_log(PhasePoint2::logarithmic(-4.605170185988091, -0.010050335853501441));
  EXPECT_NEAR(exact.q, 0.01, 1e-12);
  EXPECT_NEAR(exact.p, 0.99, 1e-12);
}

TEST(FromLog, RejectsNaN) {
  EXPECT_EQ(kind_of([] { from_log(PhasePoint2::logarithmic(std::nan(""), 0.0)); }), ErrorKind::NonFiniteInput);
}

TEST(ChartRoundTrip, RelativeErrorBelow1e12) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    // Spread over many decades, including late-epidemic tiny I.
    const double i = std::pow(10.0, -12.0 * unit(rng));
    const double s = std::pow(10.0, -6.0 * unit(rng));
    const PhasePoint2 back = from_log(to_log(PhasePoint2::direct(i, s)));
    EXPECT_LE(std::abs(back.q - i) / i, 1e-12);
    EXPECT_LE(std::abs(back.p - s) / s, 1e-12);
  }
}

TEST(R0, Ratios) {
  EXPECT_DOUBLE_EQ(r0(EpidemicParams(0.3, 0.1)), 3.0);
  EXPECT_DOUBLE_EQ(r0(EpidemicParams(0.1, 0.1)), 1.0);
  EXPECT_DOUBLE_EQ(r0(EpidemicParams(0.5, 0.25)), 2.0);
}

TEST(EpidemicParams, RejectsNonPositiveOrNonFinite) {
  EXPECT_EQ(kind_of([] { EpidemicParams(0.0, 0.1); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { EpidemicParams(0.3, -0.1); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { EpidemicParams(std::numeric_limits<double>::infinity(), 0.1); }),
            ErrorKind::InvalidParameters);
  EXPECT_EQ(kind_of([] { EpidemicParams(0.3, std::nan("")); }), ErrorKind::InvalidParameters);
}

TEST(RecoveredFrom, Examples) {
  EXPECT_NEAR(recovered_from(0.99, 0.01), 0.0, 1e-16);
  EXPECT_NEAR(recovered_from(0.0588, 0.0), 0.9412, 1e-15);
  EXPECT_EQ(kind_of([] { recovered_from(0.6, 0.5); }), ErrorKind::InvalidFractions);
  EXPECT_EQ(kind_of([] { recovered_from(-0.1, 0.5); }), ErrorKind::InvalidFractions);
}

TEST(RecoveredFrom, SumsToOneWithinOneRounding) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < 1000; ++n) {
    const double s = unit(rng);
    const double i = (1.0 - s) * unit(rng);
    const double r = recovered_from(s, i);
    EXPECT_LE(std::abs(r + s + i - 1.0), 2.0 * std::numeric_limits<double>::epsilon());
  }
}

TEST(CompartmentState, ValidatesUnitSum) {
  const CompartmentState c(0.99, 0.01);
  EXPECT_EQ(c.s(), 0.99);
  EXPECT_EQ(c.i(), 0.01);
  EXPECT_NEAR(c.r(), 0.0, 1e-16);
  EXPECT_NO_THROW(CompartmentState(0.5, 0.25, 0.25));
  EXPECT_EQ(kind_of([] { CompartmentState(0.5, 0.25, 0.3); }), ErrorKind::InvalidFractions);
  EXPECT_EQ(kind_of([] { CompartmentState(1.2, -0.2, 0.0); }), ErrorKind::InvalidFractions);
}

TEST(ApplyJ, Examples) {
  EXPECT_EQ(apply_J(Vec2(1.0, 0.0)), Vec2(0.0, -1.0));
  EXPECT_EQ(apply_J(Vec2(0.3, 0.1)), Vec2(0.1, -0.3));
  EXPECT_EQ(apply_J(Vec2(0.0, 0.0)), Vec2(0.0, 0.0));
}

TEST(ApplyJ, MatchesMatrix) {
  const Vec2 v(0.7, -1.3);
  EXPECT_EQ(SymplecticMatrix2::matrix() * v, apply_J(v));
}

TEST(ApplyJ, LinearSkewAndSquaresToMinusIdentity) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int n = 0; n < 500; ++n) {
    const Vec2 u(dist(rng), dist(rng));
    const Vec2 v(dist(rng), dist(rng));
    const double a = dist(rng);
    EXPECT_LE((apply_J(a * u + v) - (a * apply_J(u) + apply_J(v))).lpNorm<Eigen::Infinity>(), 1e-12);
    EXPECT_EQ(apply_J(apply_J(v)), Vec2(-v));
    EXPECT_EQ(v.dot(apply_J(v)), 0.0);
  }
}

TEST(ParamSchedule, RightContinuousLookup) {
  const ParamSchedule schedule({{0.0, EpidemicParams(0.3, 0.1)}, {30.0, EpidemicParams(0.15, 0.1)},
                                {60.0, EpidemicParams(0.25, 0.2)}});
  EXPECT_EQ(schedule.at(0.0), EpidemicParams(0.3, 0.1));
  EXPECT_EQ(schedule.at(29.999999), EpidemicParams(0.3, 0.1));
  EXPECT_EQ(schedule.at(30.0), EpidemicParams(0.15, 0.1));
  EXPECT_EQ(schedule.at(59.5), EpidemicParams(0.15, 0.1));
  EXPECT_EQ(schedule.at(60.0), EpidemicParams(0.25, 0.2));
  EXPECT_EQ(schedule.at(1e9), EpidemicParams(0.25, 0.2));
  EXPECT_EQ(schedule.segment_index(30.0), 1u);
  EXPECT_FALSE(schedule.is_constant());
  EXPECT_TRUE(ParamSchedule::constant(EpidemicParams(0.3, 0.1)).is_constant());
}

TEST(ParamSchedule, PiecewiseConstantProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<ParamSchedule::Segment> segments{{0.0, EpidemicParams(0.3, 0.1)}};
  double t = 0.0;
  for (int k = 1; k < 8; ++k) {
    t += 0.5 + 10.0 * unit(rng);
    segments.push_back({t, EpidemicParams(0.1 + unit(rng), 0.05 + unit(rng))});
  }
  const ParamSchedule schedule(segments);
  for (std::size_t k = 0; k < segments.size(); ++k) {
    EXPECT_EQ(schedule.at(segments[k].start), segments[k].params);
    const double end = k + 1 < segments.size() ? segments[k + 1].start : segments[k].start + 5.0;
    for (int j = 0; j < 20; ++j) {
      const double inside = segments[k].start + (end - segments[k].start) * unit(rng) * 0.999;
      EXPECT_EQ(schedule.at(inside), segments[k].params);
    }
  }
}

TEST(ParamSchedule, RejectsBadSwitchTimes) {
  using Seg = ParamSchedule::Segment;
  const EpidemicParams p(0.3, 0.1);
  EXPECT_EQ(kind_of([&] { ParamSchedule(std::vector<Seg>{}); }), ErrorKind::InvalidSchedule);
  EXPECT_EQ(kind_of([&] { ParamSchedule({{1.0, p}}); }), ErrorKind::InvalidSchedule);
  EXPECT_EQ(kind_of([&] { ParamSchedule({{0.0, p}, {10.0, p}, {10.0, p}}); }), ErrorKind::InvalidSchedule);
  EXPECT_EQ(kind_of([&] { ParamSchedule({{0.0, p}, {10.0, p}, {5.0, p}}); }), ErrorKind::InvalidSchedule);
}

TEST(Error, MessageCarriesKind) {
  const Error e(ErrorKind::NoEpidemic, "detail");
  EXPECT_EQ(e.kind(), ErrorKind::NoEpidemic);
  EXPECT_NE(std::string(e.what()).find("detail"), std::string::npos);
  EXPECT_TRUE(is_numerical_failure(ErrorKind::NewtonDivergence));
  EXPECT_TRUE(is_numerical_failure(ErrorKind::StepAcrossSingularity));
  EXPECT_FALSE(is_numerical_failure(ErrorKind::Config));
}
