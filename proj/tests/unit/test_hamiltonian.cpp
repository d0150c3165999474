#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "sirmech/dynamics.hpp"
#include "sirmech/hamiltonian.hpp"

using namespace sirmech;

namespace {

const EpidemicParams kParams(0.3, 0.1);
constexpr double kH0 = 0.30100503358535014;  // H(0.01, 0.99)

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

struct Sampler {
  std::mt19937_64 rng;
  std::uniform_real_distribution<double> unit{0.0, 1.0};

  explicit Sampler(std::uint64_t seed) : rng(seed) {}

  PhasePoint2 direct() {
    const double s = 0.01 + 0.98 * unit(rng);
    const double i = (1.0 - s) * (0.001 + 0.998 * unit(rng));
    return PhasePoint2::direct(i, s);
  }
  EpidemicParams params() { return {0.05 + unit(rng), 0.05 + unit(rng)}; }
};

}  // namespace

TEST(HamiltonianDirect, Examples) {
  EXPECT_NEAR(hamiltonian_direct(PhasePoint2::direct(0.01, 0.99), kParams), kH0, 1e-15);
  EXPECT_NEAR(hamiltonian_direct(PhasePoint2::direct(0.0, 1.0), kParams), 0.3, 1e-16);
  // Peak state from the closed form lies on the same level set.
  EXPECT_NEAR(hamiltonian_direct(PhasePoint2::direct(0.3038127, 1.0 / 3.0), kParams), kH0, 1e-6);
  EXPECT_NEAR(hamiltonian_direct(PhasePoint2::direct(0.30381268239513058, 1.0 / 3.0), kParams), kH0, 1e-15);
}

TEST(HamiltonianDirect, RejectsNonPositiveS) {
  EXPECT_EQ(kind_of([] { hamiltonian_direct(PhasePoint2::direct(0.1, 0.0), kParams); }),
            ErrorKind::SingularDenominator);
  EXPECT_EQ(kind_of([] { hamiltonian_direct(PhasePoint2::logarithmic(0.1, 0.1), kParams); }),
            ErrorKind::ChartMismatch);
}

TEST(GradHamiltonianDirect, Examples) {
  const Vec2 a = grad_hamiltonian_direct(PhasePoint2::direct(0.2, 0.5), kParams);
  EXPECT_EQ(a[0], 0.3);
  EXPECT_NEAR(a[1], 0.1, 1e-16);
  const Vec2 b = grad_hamiltonian_direct(PhasePoint2::direct(0.2, 1.0 / 3.0), kParams);
  EXPECT_EQ(b[0], 0.3);
  EXPECT_NEAR(b[1], 0.0, 1e-16);
  const Vec2 c = grad_hamiltonian_direct(PhasePoint2::direct(0.01, 0.99), kParams);
  EXPECT_NEAR(c[1], 0.19898989898989899, 1e-16);
}

TEST(HamiltonRhsDirect, Examples) {
  const Vec2 a = hamilton_rhs_direct(PhasePoint2::direct(0.2, 0.5), kParams);
  EXPECT_NEAR(a[0], 0.1, 1e-16);
  EXPECT_EQ(a[1], -0.3);
  const Vec2 b = hamilton_rhs_direct(PhasePoint2::direct(0.2, 1.0 / 3.0), kParams);
  EXPECT_NEAR(b[0], 0.0, 1e-16);
  EXPECT_EQ(b[1], -0.3);
}

TEST(HamiltonRhsOrdinary, Examples) {
  const Vec2 a = hamilton_rhs_ordinary(PhasePoint2::direct(0.01, 0.99), kParams);
  EXPECT_NEAR(a[0], 0.00197, 1e-15);
  EXPECT_NEAR(a[1], -0.00297, 1e-15);
  EXPECT_EQ(hamilton_rhs_ordinary(PhasePoint2::direct(0.0, 0.4), kParams), Vec2(0.0, 0.0));
  const Vec2 b = hamilton_rhs_ordinary(PhasePoint2::direct(0.01, 0.5), kParams);
  EXPECT_NEAR(b[0], 0.0005, 1e-17);
  EXPECT_NEAR(b[1], -0.0015, 1e-17);
}

TEST(HamiltonianLog, Examples) {
  EXPECT_NEAR(hamiltonian_log(PhasePoint2::logarithmic(std::log(0.01), std::log(0.99)), kParams), kH0, 1e-15);
  EXPECT_NEAR(hamiltonian_log(PhasePoint2::logarithmic(0.0, 0.0), kParams), 0.6, 1e-16);
}

TEST(GradHamiltonianLog, Examples) {
  const Vec2 a = grad_hamiltonian_log(PhasePoint2::logarithmic(std::log(0.01), std::log(0.5)), kParams);
  EXPECT_NEAR(a[0], 0.003, 1e-17);
  EXPECT_NEAR(a[1], 0.05, 1e-16);
  const Vec2 b = grad_hamiltonian_log(PhasePoint2::logarithmic(-1.0, std::log(1.0 / 3.0)), kParams);
  EXPECT_NEAR(b[1], 0.0, 1e-16);
  const Vec2 c = grad_hamiltonian_log(PhasePoint2::logarithmic(0.0, 0.0), kParams);
  EXPECT_NEAR(c[0], 0.3, 1e-16);
  EXPECT_NEAR(c[1], 0.2, 1e-16);
}

TEST(HamiltonRhsLog, Examples) {
  const Vec2 a = hamilton_rhs_log(PhasePoint2::logarithmic(std::log(0.01), std::log(0.5)), kParams);
  EXPECT_NEAR(a[0], 0.05, 1e-16);
  EXPECT_NEAR(a[1], -0.003, 1e-17);
  const Vec2 b = hamilton_rhs_log(PhasePoint2::logarithmic(std::log(0.01), std::log(0.99)), kParams);
  EXPECT_NEAR(b[0], 0.197, 1e-15);
  EXPECT_NEAR(b[1], -0.003, 1e-17);
}

TEST(Hamiltonian, FlowIsOrthogonalToGradient) {
  Sampler gen(201);
  for (int n = 0; n < 1000; ++n) {
    const PhasePoint2 z = gen.direct();
    const EpidemicParams p = gen.params();
    EXPECT_LE(std::abs(grad_hamiltonian_direct(z, p).dot(hamilton_rhs_direct(z, p))), 1e-14);
    const PhasePoint2 w = to_log(z);
    EXPECT_LE(std::abs(grad_hamiltonian_log(w, p).dot(hamilton_rhs_log(w, p))), 1e-14);
  }
}

TEST(Hamiltonian, RhsEqualsForcing) {
  Sampler gen(202);
  for (int n = 0; n < 1000; ++n) {
    const PhasePoint2 z = gen.direct();
    const EpidemicParams p = gen.params();
    EXPECT_LE((hamilton_rhs_direct(z, p) - rescaled_forcing(z, p).vec()).lpNorm<Eigen::Infinity>(), 1e-14);
    const PhasePoint2 w = to_log(z);
    EXPECT_LE((hamilton_rhs_log(w, p) - log_forcing(w, p).vec()).lpNorm<Eigen::Infinity>(), 1e-14);
  }
}

TEST(Hamiltonian, ChartsAgree) {
  Sampler gen(203);
  for (int n = 0; n < 1000; ++n) {
    const PhasePoint2 z = gen.direct();
    const EpidemicParams p = gen.params();
    EXPECT_NEAR(hamiltonian_log(to_log(z), p), hamiltonian_direct(z, p), 1e-12);
  }
}

TEST(Hamiltonian, OrdinaryRhsMatchesSirRhs) {
  Sampler gen(204);
  for (int n = 0; n < 500; ++n) {
    const PhasePoint2 z = gen.direct();
    const EpidemicParams p = gen.params();
    EXPECT_LE((hamilton_rhs_ordinary(z, p) - sir_rhs(z.vec(), p)).lpNorm<Eigen::Infinity>(), 1e-15);
  }
}

TEST(Hamiltonian, HessiansMatchFiniteDifferencesOfGradient) {
  Sampler gen(205);
  const double h = 1e-6;
  for (int n = 0; n < 100; ++n) {
    const PhasePoint2 z = gen.direct();
    const EpidemicParams p = gen.params();
    for (const Chart chart : {Chart::Direct, Chart::Logarithmic}) {
      const Vec2 x = chart == Chart::Direct ? z.vec() : to_log(z).vec();
      const Mat2 hess = chart_hessian(chart, x, p);
      for (int k = 0; k < 2; ++k) {
        Vec2 plus = x, minus = x;
        plus[k] += h;
        minus[k] -= h;
        const Vec2 col = (chart_gradient(chart, plus, p) - chart_gradient(chart, minus, p)) / (2.0 * h);
        for (int r = 0; r < 2; ++r) EXPECT_NEAR(hess(r, k), col[r], 1e-6 * std::max(1.0, std::abs(col[r])));
      }
    }
  }
}

TEST(DiracConstraint, Examples) {
  const Vec2 c = dirac_constraint({Vec2(0.01, 0.99), Vec2(0.495, -0.005), Chart::Direct});
  EXPECT_NEAR(c[0], 0.0, 1e-16);
  EXPECT_NEAR(c[1], 0.0, 1e-16);
  EXPECT_EQ(dirac_constraint({Vec2(0.0, 0.0), Vec2(0.0, 0.0), Chart::Direct}), Vec2(0.0, 0.0));
  EXPECT_EQ(dirac_constraint({Vec2(1.0, 0.0), Vec2(0.0, 0.0), Chart::Direct}), Vec2(1.0, 0.0));
}

TEST(ConsistentMomenta, Examples) {
  EXPECT_EQ(consistent_momenta(Vec2(0.01, 0.99)), Vec2(0.495, -0.005));
  EXPECT_EQ(consistent_momenta(Vec2(0.0, 0.0)), Vec2(0.0, 0.0));
  EXPECT_EQ(consistent_momenta(Vec2(2.0, 0.0)), Vec2(0.0, -1.0));
}

TEST(ConsistentMomenta, LieOnConstraintSurface) {
  Sampler gen(206);
  for (int n = 0; n < 500; ++n) {
    const Vec2 q = gen.direct().vec() * 10.0 - Vec2(3.0, 4.0);
    EXPECT_EQ(dirac_constraint(consistent_point(q, Chart::Direct)), Vec2(0.0, 0.0));
  }
}

TEST(DiracMultiplier, Examples) {
  const Vec2 a = dirac_multiplier(Vec2(0.2, 0.5), kParams, Chart::Direct);
  EXPECT_NEAR(a[0], -0.15, 1e-16);
  EXPECT_NEAR(a[1], -0.05, 1e-16);
  const Vec2 b = dirac_multiplier(Vec2(0.2, 1.0 / 3.0), kParams, Chart::Direct);
  EXPECT_NEAR(b[0], -0.15, 1e-16);
  EXPECT_NEAR(b[1], 0.0, 1e-16);
  const Vec2 c = dirac_multiplier(Vec2(0.0, 0.0), kParams, Chart::Logarithmic);
  EXPECT_NEAR(c[0], -0.15, 1e-16);
  EXPECT_NEAR(c[1], -0.1, 1e-16);
}

TEST(ExtendedHamiltonian, Examples) {
  const Vec2 q(0.01, 0.99);
  const ExtendedPhasePoint consistent = consistent_point(q, Chart::Direct);
  EXPECT_NEAR(extended_hamiltonian(consistent, Vec2(5.0, -7.0), kParams), kH0, 1e-15);
  const ExtendedPhasePoint free{q, Vec2(0.0, 0.0), Chart::Direct};
  EXPECT_NEAR(extended_hamiltonian(free, Vec2(1.0, 0.0), kParams), 0.31100503358535014, 1e-15);
  EXPECT_NEAR(extended_hamiltonian(free, Vec2(0.0, 0.0), kParams), kH0, 1e-15);
}

TEST(ExtendedRhs, Examples) {
  const ExtendedRate a = extended_rhs(consistent_point(Vec2(0.2, 0.5), Chart::Direct), kParams);
  EXPECT_NEAR(a.coords_rate[0], 0.1, 1e-16);
  EXPECT_NEAR(a.coords_rate[1], -0.3, 1e-16);
  EXPECT_NEAR(a.momenta_rate[0], -0.15, 1e-16);
  EXPECT_NEAR(a.momenta_rate[1], -0.05, 1e-16);
  const ExtendedRate b =
      extended_rhs(consistent_point(Vec2(std::log(0.01), std::log(0.99)), Chart::Logarithmic), kParams);
  EXPECT_NEAR(b.coords_rate[0], 0.197, 1e-15);
  EXPECT_NEAR(b.coords_rate[1], -0.003, 1e-17);
  EXPECT_NEAR(b.momenta_rate[0], -0.0015, 1e-17);
  EXPECT_NEAR(b.momenta_rate[1], -0.0985, 1e-16);
}

TEST(ExtendedRhs, RejectsPointsOffTheConstraint) {
  const ExtendedPhasePoint off{Vec2(0.2, 0.5), Vec2(0.0, 0.0), Chart::Direct};
  EXPECT_EQ(kind_of([&] { extended_rhs(off, kParams); }), ErrorKind::ConstraintViolation);
  ExtendedPhasePoint near = consistent_point(Vec2(0.2, 0.5), Chart::Direct);
  near.momenta[0] += 1e-11;
  EXPECT_NO_THROW(extended_rhs(near, kParams));
  EXPECT_EQ(kind_of([&] { extended_rhs(near, kParams, 1e-12); }), ErrorKind::ConstraintViolation);
}

TEST(ExtendedRhs, ConstraintRateVanishes) {
  Sampler gen(207);
  for (int n = 0; n < 1000; ++n) {
    const PhasePoint2 z = gen.direct();
    const EpidemicParams p = gen.params();
    for (const Chart chart : {Chart::Direct, Chart::Logarithmic}) {
      const Vec2 q = chart == Chart::Direct ? z.vec() : to_log(z).vec();
      const ExtendedRate rate = extended_rhs(consistent_point(q, chart), p);
      const Vec2 dc = rate.coords_rate + 2.0 * apply_J(rate.momenta_rate);
      EXPECT_LE(dc.lpNorm<Eigen::Infinity>(), 1e-14);
      // Q° = J G and P° = -1/2 G
      const Vec2 g = chart_gradient(chart, q, p);
      EXPECT_LE((rate.coords_rate - apply_J(g)).lpNorm<Eigen::Infinity>(), 1e-15);
      EXPECT_LE((rate.momenta_rate + 0.5 * g).lpNorm<Eigen::Infinity>(), 1e-15);
    }
  }
}
