#pragma once

// Value types shared by every module: rates, parameter schedules, compartment
// fractions, and the two-dimensional phase points in both charts.

#include <Eigen/Core>

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sirmech/errors.hpp"

namespace sirmech {

using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Matrix<double, 4, 1>;
using Mat2 = Eigen::Matrix2d;

inline constexpr double kFractionTolerance = 1e-12;

/// Direct: (I, S) with derivatives in rescaled time. Logarithmic: (ln I, ln S) in ordinary time.
enum class Chart { Direct, Logarithmic };

constexpr const char* to_string(Chart chart) noexcept {
  return chart == Chart::Direct ? "direct" : "logarithmic";
}

class EpidemicParams {
 public:
  EpidemicParams(double beta, double gamma) : beta_(beta), gamma_(gamma) {
    if (!(std::isfinite(beta) && std::isfinite(gamma)) || beta <= 0.0 || gamma <= 0.0) {
      std::ostringstream os;
      os << "rates must be positive and finite (beta=" << beta << ", gamma=" << gamma << ")";
      throw Error(ErrorKind::InvalidParameters, os.str());
    }
  }

  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

  friend bool operator==(const EpidemicParams&, const EpidemicParams&) = default;

 private:
  double beta_;
  double gamma_;
};

/// Basic reproduction number beta / gamma.
inline double r0(const EpidemicParams& params) noexcept { return params.beta() / params.gamma(); }

/// Piecewise-constant rates in ordinary time. Lookup is right-continuous:
/// a segment starting at t_k applies from t_k inclusive.
class ParamSchedule {
 public:
  struct Segment {
    double start;
    EpidemicParams params;
  };

  explicit ParamSchedule(std::vector<Segment> segments) : segments_(std::move(segments)) {
    if (segments_.empty()) throw Error(ErrorKind::InvalidSchedule, "schedule has no segments");
    if (segments_.front().start != 0.0)
      throw Error(ErrorKind::InvalidSchedule, "first segment must start at t = 0");
    for (std::size_t k = 1; k < segments_.size(); ++k) {
      if (!(segments_[k].start > segments_[k - 1].start) || !std::isfinite(segments_[k].start)) {
        std::ostringstream os;
        os << "segment start times must be strictly increasing (segment " << k << " at t = "
           << segments_[k].start << ")";
        throw Error(ErrorKind::InvalidSchedule, os.str());
      }
    }
  }

  static ParamSchedule constant(const EpidemicParams& params) { return ParamSchedule({{0.0, params}}); }

  std::size_t segment_index(double t) const noexcept {
    std::size_t k = 0;
    while (k + 1 < segments_.size() && segments_[k + 1].start <= t) ++k;
    return k;
  }

  const EpidemicParams& at(double t) const noexcept { return segments_[segment_index(t)].params; }

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  std::size_t size() const noexcept { return segments_.size(); }
  bool is_constant() const noexcept { return segments_.size() == 1; }

 private:
  std::vector<Segment> segments_;
};

/// Returns 1 - S - I after checking S, I are fractions with S + I <= 1.
inline double recovered_from(double susceptible, double infected) {
  const double tol = kFractionTolerance;
  const bool ok = std::isfinite(susceptible) && std::isfinite(infected) && susceptible >= -tol &&
                  susceptible <= 1.0 + tol && infected >= -tol && infected <= 1.0 + tol &&
                  susceptible + infected <= 1.0 + tol;
  if (!ok) {
    std::ostringstream os;
    os << "S = " << susceptible << ", I = " << infected << " are not valid fractions";
    throw Error(ErrorKind::InvalidFractions, os.str());
  }
  return 1.0 - susceptible - infected;
}

class CompartmentState {
 public:
  /// R is reconstructed from the unit-sum constraint.
  CompartmentState(double s, double i) : CompartmentState(s, i, recovered_from(s, i)) {}

  CompartmentState(double s, double i, double r) : s_(s), i_(i), r_(r) {
    const double tol = kFractionTolerance;
    auto in_unit = [tol](double x) { return std::isfinite(x) && x >= -tol && x <= 1.0 + tol; };
    if (!in_unit(s) || !in_unit(i) || !in_unit(r) || std::abs(s + i + r - 1.0) > tol) {
      std::ostringstream os;
      os.precision(17);
      os << "(S, I, R) = (" << s << ", " << i << ", " << r << ") violates the unit-sum constraint";
      throw Error(ErrorKind::InvalidFractions, os.str());
    }
  }

  double s() const noexcept { return s_; }
  double i() const noexcept { return i_; }
  double r() const noexcept { return r_; }

 private:
  double s_;
  double i_;
  double r_;
};

/// Minimal phase-space point: (Q, P) = (I, S) in the direct chart, (q, p) = (ln I, ln S)
/// in the logarithmic chart. Range checks happen in the operations that need them.
struct PhasePoint2 {
  double q;
  double p;
  Chart chart;

  static PhasePoint2 direct(double infected, double susceptible) noexcept {
    return {infected, susceptible, Chart::Direct};
  }
  static PhasePoint2 logarithmic(double log_infected, double log_susceptible) noexcept {
    return {log_infected, log_susceptible, Chart::Logarithmic};
  }

  Vec2 vec() const noexcept { return {q, p}; }
};

/// Extended coordinates Q = (I, S) (or (i, s)) with momenta P = (Upsilon, Sigma)
/// (or (upsilon, sigma)).
struct ExtendedPhasePoint {
  Vec2 coords;
  Vec2 momenta;
  Chart chart;
};

struct TimePair {
  double t;
  double tau;
};

/// The constant structure matrix [[0, 1], [-1, 0]].
struct SymplecticMatrix2 {
  static Mat2 matrix() noexcept {
    Mat2 j;
    j << 0.0, 1.0, -1.0, 0.0;
    return j;
  }
};

/// J * v = (v2, -v1).
inline Vec2 apply_J(const Vec2& v) noexcept { return {v[1], -v[0]}; }

inline PhasePoint2 to_log(const PhasePoint2& point) {
  if (point.chart != Chart::Direct) throw Error(ErrorKind::ChartMismatch, "to_log expects a direct-chart point");
  if (!(point.q > 0.0) || !(point.p > 0.0)) {
    std::ostringstream os;
    os << "logarithmic chart needs I > 0 and S > 0 (I = " << point.q << ", S = " << point.p << ")";
    throw Error(ErrorKind::NonPositiveCoordinate, os.str());
  }
  return PhasePoint2::logarithmic(std::log(point.q), std::log(point.p));
}

inline PhasePoint2 from_log(const PhasePoint2& point) {
  if (point.chart != Chart::Logarithmic)
    throw Error(ErrorKind::ChartMismatch, "from_log expects a logarithmic-chart point");
  if (!std::isfinite(point.q) || !std::isfinite(point.p))
    throw Error(ErrorKind::NonFiniteInput, "logarithmic coordinates must be finite");
  return PhasePoint2::direct(std::exp(point.q), std::exp(point.p));
}

}  // namespace sirmech
