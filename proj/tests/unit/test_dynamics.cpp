#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sirmech/dynamics.hpp"
#include "sirmech/integrate.hpp"

using namespace sirmech;

namespace {

const EpidemicParams kParams(0.3, 0.1);

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

TEST(SirRhs, Examples) {
  const Vec2 r = sir_rhs({0.01, 0.99}, kParams);
  EXPECT_NEAR(r[0], 0.00197, 1e-15);
  EXPECT_NEAR(r[1], -0.00297, 1e-15);
  EXPECT_EQ(sir_rhs({0.0, 0.7}, kParams), Vec2(0.0, 0.0));
  const Vec2 recovery = sir_rhs({0.5, 0.0}, kParams);
  EXPECT_NEAR(recovery[0], -0.05, 1e-16);
  EXPECT_EQ(recovery[1], 0.0);
}

TEST(RescaledForcing, Examples) {
  const Forcing2 f = rescaled_forcing(PhasePoint2::direct(0.2, 0.5), kParams);
  EXPECT_NEAR(f.rate_of_infection, 0.1, 1e-16);
  EXPECT_EQ(f.force_of_infection, -0.3);
  const Forcing2 peak = rescaled_forcing(PhasePoint2::direct(0.2, 1.0 / 3.0), kParams);
  EXPECT_NEAR(peak.rate_of_infection, 0.0, 1e-16);
  EXPECT_EQ(peak.force_of_infection, -0.3);
  EXPECT_EQ(kind_of([] { rescaled_forcing(PhasePoint2::direct(0.2, 0.0), kParams); }),
            ErrorKind::SingularDenominator);
  EXPECT_EQ(kind_of([] { rescaled_forcing(PhasePoint2::logarithmic(0.0, 0.0), kParams); }),
            ErrorKind::ChartMismatch);
}

TEST(RescaledAccel, Examples) {
  EXPECT_NEAR(rescaled_accel(0.1, kParams), -0.12, 1e-15);
  EXPECT_EQ(rescaled_accel(0.3, kParams), 0.0);
  EXPECT_NEAR(rescaled_accel(0.0, kParams), -0.27, 1e-15);
}

TEST(LogForcing, Examples) {
  const Forcing2 a = log_forcing(PhasePoint2::logarithmic(std::log(0.01), std::log(0.5)), kParams);
  EXPECT_NEAR(a.rate_of_infection, 0.05, 1e-15);
  EXPECT_NEAR(a.force_of_infection, -0.003, 1e-15);
  const double i = -2.0;
  const Forcing2 peak = log_forcing(PhasePoint2::logarithmic(i, std::log(0.1 / 0.3)), kParams);
  EXPECT_NEAR(peak.rate_of_infection, 0.0, 1e-15);
  EXPECT_NEAR(peak.force_of_infection, -0.3 * std::exp(i), 1e-16);
  const Forcing2 b = log_forcing(PhasePoint2::logarithmic(std::log(0.01), std::log(0.99)), kParams);
  EXPECT_NEAR(b.rate_of_infection, 0.197, 1e-15);
  EXPECT_NEAR(b.force_of_infection, -0.003, 1e-15);
  EXPECT_EQ(kind_of([] { log_forcing(PhasePoint2::logarithmic(std::nan(""), 0.0), kParams); }),
            ErrorKind::NonFiniteInput);
}

TEST(LogAccel, Examples) {
  EXPECT_NEAR(log_accel(std::log(0.01), 0.197, kParams), -0.000891, 1e-15);
  EXPECT_EQ(log_accel(1.7, -0.1, kParams), 0.0);
  EXPECT_NEAR(log_accel(0.0, 0.0, kParams), -0.03, 1e-16);
}

TEST(TimeDilation, Examples) {
  EXPECT_NEAR(time_dilation({0.01, 0.99}), 0.0099, 1e-17);
  EXPECT_EQ(time_dilation({0.0, 1.0}), 0.0);
  EXPECT_EQ(time_dilation({0.5, 0.5}), 0.25);
}

TEST(ChartConsistency, LogForcingIsRelativeRate) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < 500; ++n) {
    const double s = 0.01 + 0.98 * unit(rng);
    const double i = (1.0 - s) * (0.001 + 0.998 * unit(rng));
    const EpidemicParams p(0.05 + unit(rng), 0.05 + unit(rng));
    const Vec2 rhs = sir_rhs({i, s}, p);
    const Forcing2 f = log_forcing(to_log(PhasePoint2::direct(i, s)), p);
    EXPECT_NEAR(f.rate_of_infection, rhs[0] / i, 1e-12);
    EXPECT_NEAR(f.force_of_infection, rhs[1] / s, 1e-12);
  }
}

TEST(ChartConsistency, RescaledForcingIsRateOverDilation) {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int n = 0; n < 500; ++n) {
    const double s = 0.01 + 0.98 * unit(rng);
    const double i = (1.0 - s) * (0.001 + 0.998 * unit(rng));
    const EpidemicParams p(0.05 + unit(rng), 0.05 + unit(rng));
    const Vec2 rhs = sir_rhs({i, s}, p);
    const Forcing2 f = rescaled_forcing(PhasePoint2::direct(i, s), p);
    const double dilation = time_dilation({i, s});
    EXPECT_NEAR(f.rate_of_infection, rhs[0] / dilation, 1e-12);
    EXPECT_NEAR(f.force_of_infection, rhs[1] / dilation, 1e-12);
  }
}

namespace {

// Max |central difference of the rate - accel(rate)| along an RK4 trajectory.
double reduction_error_rescaled(double h) {
  RunSpec spec;
  spec.formulation = Formulation::RescaledTau;
  spec.dt = h;
  spec.t_end = 40.0;
  const Trajectory traj = integrate(spec, CompartmentState(0.99, 0.01), ParamSchedule::constant(kParams));
  auto rate = [&](std::size_t n) { return kParams.beta() - kParams.gamma() / traj.samples[n].state.s(); };
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < traj.samples.size(); ++n) {
    const double fd = (rate(n + 1) - rate(n - 1)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - rescaled_accel(rate(n), kParams)));
  }
  return worst;
}

double reduction_error_log(double h) {
  RunSpec spec;
  spec.formulation = Formulation::LogT;
  spec.dt = h;
  spec.t_end = 100.0;
  const Trajectory traj = integrate(spec, CompartmentState(0.99, 0.01), ParamSchedule::constant(kParams));
  auto rate = [&](std::size_t n) { return kParams.beta() * traj.samples[n].state.s() - kParams.gamma(); };
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < traj.samples.size(); ++n) {
    const double fd = (rate(n + 1) - rate(n - 1)) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - log_accel(traj.samples[n].coords[0], rate(n), kParams)));
  }
  return worst;
}

}  // namespace

TEST(ReductionConsistency, RescaledSecondOrderFormMatchesFlow) {
  // Late in the epidemic S is small and I°° is of order 10, so only the
  // refinement rate is meaningful here.
  const double coarse = reduction_error_rescaled(0.02);
  const double fine = reduction_error_rescaled(0.01);
  EXPECT_LT(coarse, 1e-2);
  EXPECT_NEAR(std::log2(coarse / fine), 2.0, 0.2);
}

TEST(ReductionConsistency, LogSecondOrderFormMatchesFlow) {
  const double coarse = reduction_error_log(0.2);
  const double fine = reduction_error_log(0.1);
  EXPECT_LT(coarse, 1e-5);
  EXPECT_NEAR(std::log2(coarse / fine), 2.0, 0.2);
}
