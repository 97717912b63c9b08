#pragma once

// Exact law of the instantaneous frequency phi'(t) of a proper Gaussian
// process at a fixed time, from the covariance derivatives
//   a = r_x(t,t), b = d1 r_yx(t,t), c = d1 r_x(t,t), d = d1 d2 r_x(t,t).
// With delta = ad - b^2 - c^2 >= 0:
//   delta > 0          pdf (a/2) delta ((a y - b)^2 + delta)^{-3/2}
//   delta = 0, a > 0   point mass at b/a
//   a = 0              phi'(t) = +inf almost surely

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "gaussif/errors.hpp"
#include "gaussif/ext_real.hpp"
#include "gaussif/models.hpp"

namespace gaussif {

struct IFTolerances {
  double delta_rel = 1e-9;  // delta is zero when |delta| <= delta_rel * (ad + b^2 + c^2 + eps)
  double a_rel = 1e-12;     // a is zero when a <= a_rel * (1 + d)
};

struct IFParams {
  double a = 0.0;      // power
  double b = 0.0;      // power * rad/s
  double c = 0.0;      // power / s
  double d = 0.0;      // power * (rad/s)^2
  double delta = 0.0;  // ad - b^2 - c^2, clamped to 0 inside tolerance
  double t = 0.0;      // time the values were taken at
};

enum class Regime { HeavyTail, Degenerate, InfiniteIF };

enum class VarianceKind { Infinite, Zero, Undefined };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::HeavyTail: return "heavy-tail";
    case Regime::Degenerate: return "degenerate";
    case Regime::InfiniteIF: return "infinite";
  }
  return "?";
}

inline std::string to_string(VarianceKind v) {
  switch (v) {
    case VarianceKind::Infinite: return "infinite";
    case VarianceKind::Zero: return "zero";
    case VarianceKind::Undefined: return "undefined";
  }
  return "?";
}

inline double delta_tolerance(double a, double b, double c, double d, double delta_rel) {
  return delta_rel * (a * d + b * b + c * c + std::numeric_limits<double>::epsilon());
}

inline double a_tolerance(double d, double a_rel) { return a_rel * (1.0 + d); }

/// Builds validated IF parameters: delta = ad - b^2 - c^2, clamped to 0 when
/// within tolerance, a ParameterDomainError when clearly negative.
inline IFParams make_if_params(double a, double b, double c, double d, double t = 0.0,
                               const IFTolerances& tol = {}) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
    throw NumericError("non-finite IF parameter");
  const double atol = a_tolerance(std::abs(d), tol.a_rel);
  if (a < -atol) throw ParameterDomainError("IF parameter a = r_x(t,t) is negative");
  if (d < -atol) throw ParameterDomainError("IF parameter d = E ydot^2 is negative");
  IFParams p{std::max(a, 0.0), b, c, std::max(d, 0.0), 0.0, t};
  p.delta = p.a * p.d - p.b * p.b - p.c * p.c;
  const double dtol = delta_tolerance(p.a, p.b, p.c, p.d, tol.delta_rel);
  if (std::abs(p.delta) <= dtol) {
    p.delta = 0.0;
  } else if (p.delta < 0.0) {
    throw ParameterDomainError("discriminant ad - b^2 - c^2 = " + std::to_string(p.delta) +
                               " is negative: covariance matrix not positive semidefinite");
  }
  return p;
}

inline IFParams if_params(const DerivBundle& d, double t, const IFTolerances& tol = {}) {
  return make_if_params(d.r_xx, d.d1_r_yx, d.d1_r_x, d.d11_22_r_x, t, tol);
}

inline IFParams if_params(const CovarianceModel& model, double t, const IFTolerances& tol = {}) {
  return if_params(eval_cov_derivs(model, t), t, tol);
}

/// Covariance of (x(t), ydot(t), y(t), xdot(t)).
struct CovMatrix4 {
  Eigen::Matrix4d m;
};

inline CovMatrix4 cov_matrix(const IFParams& p) {
  CovMatrix4 out;
  // clang-format off
  out.m << p.a, p.b, 0.0, p.c,
           p.b, p.d, p.c, 0.0,
           0.0, p.c, p.a, -p.b,
           p.c, 0.0, -p.b, p.d;
  // clang-format on
  return out;
}

inline Regime classify_regime(const IFParams& p, const IFTolerances& tol = {}) {
  if (p.delta > delta_tolerance(p.a, p.b, p.c, p.d, tol.delta_rel)) return Regime::HeavyTail;
  if (p.a > a_tolerance(p.d, tol.a_rel)) return Regime::Degenerate;
  return Regime::InfiniteIF;
}

namespace detail {
inline void require_heavy_tail(const IFParams& p, const char* what) {
  if (classify_regime(p) != Regime::HeavyTail)
    throw RegimeError(std::string(what) + " is only defined in the heavy-tail regime (got " +
                      to_string(classify_regime(p)) + ")");
}
}  // namespace detail

/// Density of phi'(t) at y (s/rad).
inline double pdf(const IFParams& p, double y) {
  detail::require_heavy_tail(p, "pdf");
  const double v = p.a * y - p.b;
  const double s = v * v + p.delta;
  return 0.5 * p.a * p.delta / (s * std::sqrt(s));
}

/// F(y) = 1/2 + (a y - b) / (2 sqrt((a y - b)^2 + delta)).
inline double cdf(const IFParams& p, double y) {
  detail::require_heavy_tail(p, "cdf");
  if (y == std::numeric_limits<double>::infinity()) return 1.0;
  if (y == -std::numeric_limits<double>::infinity()) return 0.0;
  const double v = p.a * y - p.b;
  const double r = std::sqrt(v * v + p.delta);
  // Left tail without cancellation: 1/2 + v/(2r) = delta / (2 r (r - v)).
  if (v < 0.0) return p.delta / (2.0 * r * (r - v));
  return 0.5 + v / (2.0 * r);
}

/// Inverse of cdf on (0, 1).
inline double quantile(const IFParams& p, double q) {
  if (!(q > 0.0 && q < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  detail::require_heavy_tail(p, "quantile");
  const double u = 2.0 * q - 1.0;
  const double one_minus_u2 = 4.0 * q * (1.0 - q);
  return p.b / p.a + (u / p.a) * std::sqrt(p.delta / one_minus_u2);
}

/// E phi'(t): b/a off the zero set of a, +inf on it.
inline ExtReal mean_if(const IFParams& p, const IFTolerances& tol = {}) {
  if (classify_regime(p, tol) == Regime::InfiniteIF) return ExtReal::plus_infinity();
  return ExtReal(p.b / p.a);
}

inline VarianceKind variance_if(const IFParams& p, const IFTolerances& tol = {}) {
  switch (classify_regime(p, tol)) {
    case Regime::HeavyTail: return VarianceKind::Infinite;
    case Regime::Degenerate: return VarianceKind::Zero;
    case Regime::InfiniteIF: return VarianceKind::Undefined;
  }
  return VarianceKind::Undefined;
}

/// Regime-tagged law of phi'(t).
struct IFDistribution {
  Regime regime = Regime::InfiniteIF;
  IFParams params;
  ExtReal center = ExtReal::plus_infinity();  // b/a when finite
};

inline IFDistribution if_distribution(const IFParams& p, const IFTolerances& tol = {}) {
  return {classify_regime(p, tol), p, mean_if(p, tol)};
}

}  // namespace gaussif
