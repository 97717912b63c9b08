#pragma once

// Covariance models of zero-mean proper complex Gaussian processes
// z(t) = x(t) + i y(t).
//
// Conventions: r_x(t,s) = E x(t)x(s), r_yx(t,s) = E y(t)x(s) and
// r_z(t,s) = E z(t) conj(z(s)) = 2 r_x(t,s) + 2i r_yx(t,s).
// Properness means r_x = r_y and r_yx(t,s) = -r_yx(s,t).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gaussif/errors.hpp"

namespace gaussif {

using cplx = std::complex<double>;

/// Real function of the lag together with its first two derivatives.
struct LagFunction {
  std::function<double(double)> value;
  std::function<double(double)> first;
  std::function<double(double)> second;

  static LagFunction zero() {
    auto z = [](double) { return 0.0; };
    return {z, z, z};
  }

  /// amp * cos(freq * tau)
  static LagFunction cosine(double amp, double freq) {
    return {[=](double tau) { return amp * std::cos(freq * tau); },
            [=](double tau) { return -amp * freq * std::sin(freq * tau); },
            [=](double tau) { return -amp * freq * freq * std::cos(freq * tau); }};
  }

  /// amp * sin(freq * tau)
  static LagFunction sine(double amp, double freq) {
    return {[=](double tau) { return amp * std::sin(freq * tau); },
            [=](double tau) { return amp * freq * std::cos(freq * tau); },
            [=](double tau) { return -amp * freq * freq * std::sin(freq * tau); }};
  }

  /// amp * exp(-rate * tau^2)
  static LagFunction gaussian(double amp, double rate) {
    return {[=](double tau) { return amp * std::exp(-rate * tau * tau); },
            [=](double tau) { return -2.0 * rate * tau * amp * std::exp(-rate * tau * tau); },
            [=](double tau) {
              return amp * (4.0 * rate * rate * tau * tau - 2.0 * rate) *
                     std::exp(-rate * tau * tau);
            }};
  }

  friend LagFunction operator+(LagFunction l, LagFunction r) {
    return {[f = l.value, g = r.value](double tau) { return f(tau) + g(tau); },
            [f = l.first, g = r.first](double tau) { return f(tau) + g(tau); },
            [f = l.second, g = r.second](double tau) { return f(tau) + g(tau); }};
  }
};

/// Wide-sense stationary: r_x(t,s) = rho_x(t-s) (even), r_yx(t,s) = rho_yx(t-s) (odd).
struct Wss {
  LagFunction rho_x;
  LagFunction rho_yx = LagFunction::zero();
};

/// x, y independent with r_x(t,s) = exp(-2 alpha ((t+s)/2)^2 - beta/2 (t-s)^2).
/// A valid covariance iff beta >= alpha >= 0.
struct LocallyStationary {
  double alpha = 0.0;  // 1/s^2
  double beta = 0.0;   // 1/s^2
};

/// z(t) = X g(t) with X proper complex Gaussian, E|X|^2 = variance.
/// r_z(t,s) = variance * g(t) conj(g(s)).
struct RankOne {
  std::function<cplx(double)> g;
  std::function<cplx(double)> dg;
  double variance = 2.0;
};

/// z(t) = X1 e^{i t xi} + X2 e^{i t eta}, unit-variance jointly proper
/// weights with E X1 conj(X2) = corr.
struct TwoTone {
  double xi = 0.0;   // rad/s
  double eta = 0.0;  // rad/s
  cplx corr{0.0, 0.0};
};

struct SpectralAtom {
  double xi = 0.0;   // rad/s
  double eta = 0.0;  // rad/s
  cplx weight{0.0, 0.0};
};

/// Finite atomic spectral measure m_z on the (xi, eta) plane:
/// r_z(t,s) = sum_k w_k exp(i (t xi_k - s eta_k)).
struct SpectralAtomMeasure {
  std::vector<SpectralAtom> atoms;
};

struct AtomicSpectral {
  SpectralAtomMeasure measure;
};

/// Covariance given by raw real functions; derivatives by central finite
/// differences with step step_scale * (1 + |t|). An empty r_y means r_y = r_x.
struct NumericCov {
  std::function<double(double, double)> r_x;
  std::function<double(double, double)> r_yx;
  std::function<double(double, double)> r_y;
  double step_scale = 1e-5;
};

using CovarianceModel =
    std::variant<Wss, LocallyStationary, RankOne, TwoTone, AtomicSpectral, NumericCov>;

/// Covariance-derivative values on the diagonal t = s.
struct DerivBundle {
  double r_xx = 0.0;        // r_x(t,t)
  double d1_r_x = 0.0;      // d/dt r_x(t,s) at s = t
  double d11_22_r_x = 0.0;  // d^2/dt ds r_x(t,s) at s = t
  double d1_r_yx = 0.0;     // d/dt r_yx(t,s) at s = t
};

/// Real components of the covariance at one (t, s) pair.
struct CovParts {
  double r_x = 0.0;
  double r_y = 0.0;
  double r_yx = 0.0;
};

inline std::string model_name(const CovarianceModel& m) {
  struct {
    std::string operator()(const Wss&) const { return "wss"; }
    std::string operator()(const LocallyStationary&) const { return "locally-stationary"; }
    std::string operator()(const RankOne&) const { return "rank-one"; }
    std::string operator()(const TwoTone&) const { return "two-tone"; }
    std::string operator()(const AtomicSpectral&) const { return "atomic"; }
    std::string operator()(const NumericCov&) const { return "numeric"; }
  } v;
  return std::visit(v, m);
}

// ---------------------------------------------------------------------------
// Presets

/// Atoms of the two-tone model: (xi,xi,1), (eta,eta,1), (xi,eta,c), (eta,xi,conj c).
inline SpectralAtomMeasure two_tone_atoms(const TwoTone& m) {
  return {{{m.xi, m.xi, {1.0, 0.0}},
           {m.eta, m.eta, {1.0, 0.0}},
           {m.xi, m.eta, m.corr},
           {m.eta, m.xi, std::conj(m.corr)}}};
}

/// g(t) = amplitude * exp(-decay t^2 / 2) * exp(i (omega t + chirp t^2 / 2)).
/// Instantaneous frequency of g is omega + chirp * t.
inline RankOne gaussian_chirp(double amplitude, double decay, double omega, double chirp,
                             double variance = 2.0) {
  RankOne r;
  r.g = [=](double t) {
    return amplitude * std::exp(-0.5 * decay * t * t) *
           std::exp(cplx(0.0, omega * t + 0.5 * chirp * t * t));
  };
  r.dg = [=](double t) {
    const cplx g = amplitude * std::exp(-0.5 * decay * t * t) *
                   std::exp(cplx(0.0, omega * t + 0.5 * chirp * t * t));
    return g * cplx(-decay * t, omega + chirp * t);
  };
  r.variance = variance;
  return r;
}

// ---------------------------------------------------------------------------
// Validation

inline void validate(const SpectralAtomMeasure& m) {
  for (const auto& at : m.atoms) {
    if (!std::isfinite(at.xi) || !std::isfinite(at.eta) || !std::isfinite(at.weight.real()) ||
        !std::isfinite(at.weight.imag()))
      throw ParameterDomainError("spectral atom with non-finite coordinate or weight");
    const bool paired = std::any_of(m.atoms.begin(), m.atoms.end(), [&](const SpectralAtom& o) {
      return o.xi == at.eta && o.eta == at.xi && o.weight == std::conj(at.weight);
    });
    if (!paired)
      throw ParameterDomainError("spectral measure is not Hermitian: atom (" +
                                 std::to_string(at.xi) + ", " + std::to_string(at.eta) +
                                 ") has no conjugate partner");
  }
  // Positive semidefiniteness of the weight matrix over the shared support.
  std::vector<double> support;
  for (const auto& at : m.atoms) {
    for (double f : {at.xi, at.eta})
      if (std::find(support.begin(), support.end(), f) == support.end()) support.push_back(f);
  }
  if (support.empty()) return;
  const auto n = static_cast<Eigen::Index>(support.size());
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n, n);
  auto index = [&](double f) {
    return static_cast<Eigen::Index>(std::find(support.begin(), support.end(), f) -
                                     support.begin());
  };
  for (const auto& at : m.atoms) w(index(at.xi), index(at.eta)) += at.weight;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w, Eigen::EigenvaluesOnly);
  const double trace = w.trace().real();
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(trace, 1e-300))
    throw ParameterDomainError("spectral weight matrix is not positive semidefinite");
}

inline void validate(const CovarianceModel& model) {
  struct {
    void operator()(const Wss& m) const {
      if (!m.rho_x.value || !m.rho_x.first || !m.rho_x.second || !m.rho_yx.value ||
          !m.rho_yx.first || !m.rho_yx.second)
        throw ParameterDomainError("wss model needs rho_x and rho_yx with two derivatives");
    }
    void operator()(const LocallyStationary& m) const {
      if (!(m.alpha >= 0.0) || !(m.beta >= m.alpha) || !std::isfinite(m.beta))
        throw ParameterDomainError("locally stationary model requires beta >= alpha >= 0");
    }
    void operator()(const RankOne& m) const {
      if (!m.g || !m.dg) throw ParameterDomainError("rank-one model needs g and its derivative");
      if (!(m.variance >= 0.0) || !std::isfinite(m.variance))
        throw ParameterDomainError("rank-one variance must be finite and nonnegative");
    }
    void operator()(const TwoTone& m) const {
      if (!std::isfinite(m.xi) || !std::isfinite(m.eta))
        throw ParameterDomainError("two-tone frequencies must be finite");
      if (m.xi == m.eta) throw ParameterDomainError("two-tone model requires xi != eta");
      if (!(std::abs(m.corr) < 1.0)) throw ParameterDomainError("two-tone model requires |corr| < 1");
    }
    void operator()(const AtomicSpectral& m) const { validate(m.measure); }
    void operator()(const NumericCov& m) const {
      if (!m.r_x || !m.r_yx) throw ParameterDomainError("numeric model needs r_x and r_yx");
      if (!(m.step_scale > 0.0)) throw ParameterDomainError("numeric model step must be positive");
    }
  } v;
  std::visit(v, model);
}

// ---------------------------------------------------------------------------
// Evaluation

/// sum_k w_k exp(i (t xi_k - s eta_k)); zero for an empty measure.
inline cplx spectral_to_cov(const SpectralAtomMeasure& m, double t, double s) {
  cplx sum{0.0, 0.0};
  for (const auto& at : m.atoms) sum += at.weight * std::exp(cplx(0.0, t * at.xi - s * at.eta));
  return sum;
}

namespace detail {

inline cplx two_tone_cov(const TwoTone& m, double t, double s) {
  return std::exp(cplx(0.0, m.xi * (t - s))) + std::exp(cplx(0.0, m.eta * (t - s))) +
         m.corr * std::exp(cplx(0.0, m.xi * t - m.eta * s)) +
         std::conj(m.corr) * std::exp(cplx(0.0, m.eta * t - m.xi * s));
}

inline double locally_stationary_rx(const LocallyStationary& m, double t, double s) {
  const double mid = 0.5 * (t + s);
  const double lag = t - s;
  return std::exp(-2.0 * m.alpha * mid * mid - 0.5 * m.beta * lag * lag);
}

/// Covariance components without parameter validation.
inline CovParts raw_parts(const CovarianceModel& model, double t, double s) {
  struct {
    double t, s;
    CovParts from_rz(cplx rz) const {
      return {0.5 * rz.real(), 0.5 * rz.real(), 0.5 * rz.imag()};
    }
    CovParts operator()(const Wss& m) const {
      const double rx = m.rho_x.value(t - s);
      return {rx, rx, m.rho_yx.value(t - s)};
    }
    CovParts operator()(const LocallyStationary& m) const {
      const double rx = locally_stationary_rx(m, t, s);
      return {rx, rx, 0.0};
    }
    CovParts operator()(const RankOne& m) const {
      return from_rz(m.variance * m.g(t) * std::conj(m.g(s)));
    }
    CovParts operator()(const TwoTone& m) const { return from_rz(two_tone_cov(m, t, s)); }
    CovParts operator()(const AtomicSpectral& m) const {
      return from_rz(spectral_to_cov(m.measure, t, s));
    }
    CovParts operator()(const NumericCov& m) const {
      const double rx = m.r_x(t, s);
      return {rx, m.r_y ? m.r_y(t, s) : rx, m.r_yx(t, s)};
    }
  } v{t, s};
  return std::visit(v, model);
}

inline cplx raw_cov(const CovarianceModel& model, double t, double s) {
  const CovParts p = raw_parts(model, t, s);
  return {p.r_x + p.r_y, 2.0 * p.r_yx};
}

}  // namespace detail

/// r_x, r_y and r_yx at (t, s).
inline CovParts eval_parts(const CovarianceModel& model, double t, double s) {
  validate(model);
  return detail::raw_parts(model, t, s);
}

/// r_z(t,s) = 2 r_x(t,s) + 2i r_yx(t,s). (For a non-proper NumericCov the real
/// part is r_x + r_y.)
inline cplx eval_cov(const CovarianceModel& model, double t, double s) {
  validate(model);
  return detail::raw_cov(model, t, s);
}

/// Central-difference derivatives of raw covariance functions at (t,t).
inline DerivBundle finite_difference_derivs(const std::function<double(double, double)>& r_x,
                                            const std::function<double(double, double)>& r_yx,
                                            double t, double step_scale = 1e-5) {
  const double h = step_scale * (1.0 + std::abs(t));
  DerivBundle d;
  d.r_xx = r_x(t, t);
  d.d1_r_x = (r_x(t + h, t) - r_x(t - h, t)) / (2.0 * h);
  d.d11_22_r_x = (r_x(t + h, t + h) - r_x(t + h, t - h) - r_x(t - h, t + h) + r_x(t - h, t - h)) /
                 (4.0 * h * h);
  d.d1_r_yx = (r_yx(t + h, t) - r_yx(t - h, t)) / (2.0 * h);
  return d;
}

/// Diagonal covariance derivatives. Analytic for every preset, finite
/// differences for NumericCov.
inline DerivBundle eval_cov_derivs(const CovarianceModel& model, double t) {
  validate(model);
  struct {
    double t;
    DerivBundle operator()(const Wss& m) const {
      // rho_x even: rho_x'(0) = 0 exactly.
      return {m.rho_x.value(0.0), 0.0, -m.rho_x.second(0.0), m.rho_yx.first(0.0)};
    }
    DerivBundle operator()(const LocallyStationary& m) const {
      const double e = std::exp(-2.0 * m.alpha * t * t);
      return {e, -2.0 * m.alpha * t * e,
              ((m.beta - m.alpha) + 4.0 * m.alpha * m.alpha * t * t) * e, 0.0};
    }
    DerivBundle operator()(const RankOne& m) const {
      const cplx g = m.g(t);
      const cplx dg = m.dg(t);
      const cplx d1 = m.variance * dg * std::conj(g);  // d/dt r_z(t,s) at s = t
      return {0.5 * m.variance * std::norm(g), 0.5 * d1.real(), 0.5 * m.variance * std::norm(dg),
              0.5 * d1.imag()};
    }
    DerivBundle operator()(const TwoTone& m) const {
      const double th = t * (m.xi - m.eta);
      const double cr = m.corr.real() * std::cos(th) - m.corr.imag() * std::sin(th);
      const double sr = m.corr.real() * std::sin(th) + m.corr.imag() * std::cos(th);
      return {1.0 + cr, 0.5 * (m.eta - m.xi) * sr,
              0.5 * (m.xi * m.xi + m.eta * m.eta + 2.0 * m.xi * m.eta * cr),
              0.5 * (m.xi + m.eta) * (1.0 + cr)};
    }
    DerivBundle operator()(const AtomicSpectral& m) const {
      cplx r0{0.0, 0.0}, r1{0.0, 0.0}, r12{0.0, 0.0};
      for (const auto& at : m.measure.atoms) {
        const cplx e = at.weight * std::exp(cplx(0.0, t * (at.xi - at.eta)));
        r0 += e;
        r1 += cplx(0.0, at.xi) * e;
        r12 += at.xi * at.eta * e;
      }
      return {0.5 * r0.real(), 0.5 * r1.real(), 0.5 * r12.real(), 0.5 * r1.imag()};
    }
    DerivBundle operator()(const NumericCov& m) const {
      return finite_difference_derivs(m.r_x, m.r_yx, t, m.step_scale);
    }
  } v{t};
  const DerivBundle d = std::visit(v, model);
  if (!std::isfinite(d.r_xx) || !std::isfinite(d.d1_r_x) || !std::isfinite(d.d11_22_r_x) ||
      !std::isfinite(d.d1_r_yx))
    throw NumericError("non-finite covariance derivative at t=" + std::to_string(t));
  return d;
}

/// Finite-difference twin of a model: same r_x, r_y, r_yx, derivatives by FD.
inline NumericCov numeric_from(CovarianceModel base, double step_scale = 1e-5) {
  validate(base);
  auto shared = std::make_shared<const CovarianceModel>(std::move(base));
  NumericCov n;
  n.r_x = [shared](double t, double s) { return detail::raw_parts(*shared, t, s).r_x; };
  n.r_y = [shared](double t, double s) { return detail::raw_parts(*shared, t, s).r_y; };
  n.r_yx = [shared](double t, double s) { return detail::raw_parts(*shared, t, s).r_yx; };
  n.step_scale = step_scale;
  return n;
}

// ---------------------------------------------------------------------------
// Checks

struct ProperReport {
  double max_rx_ry = 0.0;        // max |r_x(t,s) - r_y(t,s)|
  double max_symmetry = 0.0;     // max |r_x(t,s) - r_x(s,t)|
  double max_antisymmetry = 0.0; // max |r_yx(t,s) + r_yx(s,t)|
  double max_violation = 0.0;
  double tolerance = 0.0;
  bool passes = false;
};

inline ProperReport check_properness(const CovarianceModel& model, std::span<const double> grid,
                                     double tol = 1e-12) {
  if (grid.empty()) throw DomainError("properness check needs a nonempty grid");
  validate(model);
  ProperReport rep;
  for (double t : grid) {
    for (double s : grid) {
      const CovParts ts = detail::raw_parts(model, t, s);
      const CovParts st = detail::raw_parts(model, s, t);
      rep.max_rx_ry = std::max(rep.max_rx_ry, std::abs(ts.r_x - ts.r_y));
      rep.max_symmetry = std::max(rep.max_symmetry, std::abs(ts.r_x - st.r_x));
      rep.max_antisymmetry = std::max(rep.max_antisymmetry, std::abs(ts.r_yx + st.r_yx));
    }
  }
  rep.max_violation = std::max({rep.max_rx_ry, rep.max_symmetry, rep.max_antisymmetry});
  rep.tolerance = tol;
  rep.passes = rep.max_violation <= tol;
  return rep;
}

struct PsdReport {
  double min_eigenvalue = 0.0;
  double trace = 0.0;
  int real_rank = 0;  // numerical rank of the real covariance of (x(t_i), y(t_i))
  bool passes = false;
};

/// Spot check that the real 2n x 2n covariance of (x(t_1..n), y(t_1..n)) is
/// positive semidefinite: min eigenvalue >= -1e-10 * trace. Parameter-domain
/// checks are skipped so invalid parameter sets can be diagnosed.
inline PsdReport psd_spotcheck(const CovarianceModel& model, std::span<const double> grid) {
  if (grid.empty() || grid.size() > 64)
    throw DomainError("psd spot check needs between 1 and 64 grid points");
  const auto n = static_cast<Eigen::Index>(grid.size());
  Eigen::MatrixXd c(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const CovParts p = detail::raw_parts(model, grid[i], grid[j]);
      c(i, j) = p.r_x;
      c(n + i, n + j) = p.r_y;
      c(n + i, j) = p.r_yx;  // E y(t_i) x(t_j)
      c(j, n + i) = p.r_yx;  // E x(t_j) y(t_i)
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
  PsdReport rep;
  rep.trace = c.trace();
  rep.min_eigenvalue = es.eigenvalues().minCoeff();
  const double floor = 1e-10 * std::abs(rep.trace);
  rep.passes = rep.min_eigenvalue >= -floor;
  rep.real_rank = static_cast<int>((es.eigenvalues().array() > floor).count());
  return rep;
}

/// sum_k sqrt(1 + xi_k^2) sqrt(1 + eta_k^2) |w_k|
inline double spectral_moment_order_one(const SpectralAtomMeasure& m) {
  double sum = 0.0;
  for (const auto& at : m.atoms)
    sum += std::sqrt(1.0 + at.xi * at.xi) * std::sqrt(1.0 + at.eta * at.eta) * std::abs(at.weight);
  return sum;
}

}  // namespace gaussif
