#pragma once

// Wigner distributions of deterministic signals and Wigner spectra of atomic
// harmonizable processes, with their normalized first frequency moments.
//
//   W_f(t, xi) = int f(t + tau/2) conj(f(t - tau/2)) exp(-i tau xi) dtau
//
// The discrete transforms below use a lag grid tau_m = m * dtau and frequency
// bins xi_j = 2 pi j / (L dtau), j in [-L/2, L/2), so that
// sum_j W(t, xi_j) dxi = 2 pi |f(t)|^2 holds exactly (DFT inversion).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <ostream>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "gaussif/errors.hpp"
#include "gaussif/ext_real.hpp"
#include "gaussif/ifdist.hpp"
#include "gaussif/models.hpp"

namespace gaussif {

/// (x ydot - xdot y) / (x^2 + y^2), or +inf where the signal vanishes.
inline ExtReal deterministic_if(double x, double y, double xdot, double ydot) {
  const double power = x * x + y * y;
  if (!(power > 0.0)) return ExtReal::plus_infinity();
  return ExtReal((x * ydot - xdot * y) / power);
}

inline ExtReal deterministic_if(cplx f, cplx df) {
  return deterministic_if(f.real(), f.imag(), df.real(), df.imag());
}

/// Uniformly sampled complex signal f(t0 + k dt), k = 0..N-1.
struct SignalGrid {
  double t0 = 0.0;
  double dt = 1.0;
  std::vector<cplx> samples;
  std::vector<cplx> derivative;  // optional, same length when present

  double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }

  void validate() const {
    if (samples.size() < 8) throw DomainError("signal grid needs at least 8 samples");
    if (!(dt > 0.0)) throw DomainError("signal grid spacing must be positive");
    if (!derivative.empty() && derivative.size() != samples.size())
      throw DomainError("derivative samples must match the signal length");
  }

  static SignalGrid sample(const std::function<cplx(double)>& f, double t0, double dt,
                           std::size_t n) {
    SignalGrid g{t0, dt, {}, {}};
    g.samples.reserve(n);
    for (std::size_t k = 0; k < n; ++k) g.samples.push_back(f(g.time(k)));
    return g;
  }
};

/// Real time-frequency grid, row-major over (time, frequency).
struct WignerGrid {
  std::vector<double> times;
  std::vector<double> freqs;
  std::vector<double> values;
  std::vector<double> zeroth;  // sum_j W(t_i, xi_j) dxi per time
  double dxi = 0.0;
  double max_imag_residue = 0.0;  // largest |Im W| discarded, relative to max |W|

  double at(std::size_t ti, std::size_t fi) const { return values[ti * freqs.size() + fi]; }
};

namespace detail {

/// One time slice: lag kernel k[m] (stored at index m mod L) -> W on the
/// centered frequency axis. Returns the largest |Im| residue.
inline double wigner_slice(Eigen::FFT<double>& fft, const std::vector<cplx>& kernel, double dtau,
                           std::vector<cplx>& spectrum, double* out) {
  fft.fwd(spectrum, kernel);
  const std::size_t len = kernel.size();
  double residue = 0.0;
  for (std::size_t j = 0; j < len; ++j) {
    // centered bin jc = j - len/2 lives at FFT index jc mod len
    const std::size_t src = (j + len - len / 2) % len;
    const cplx w = dtau * spectrum[src];
    out[j] = w.real();
    residue = std::max(residue, std::abs(w.imag()));
  }
  return residue;
}

inline std::vector<double> centered_freqs(std::size_t len, double dtau) {
  std::vector<double> f(len);
  const double dxi = 2.0 * std::numbers::pi / (static_cast<double>(len) * dtau);
  for (std::size_t j = 0; j < len; ++j)
    f[j] = (static_cast<double>(j) - static_cast<double>(len / 2)) * dxi;
  return f;
}

inline void finish(WignerGrid& w, double residue) {
  double vmax = 0.0;
  for (double v : w.values) vmax = std::max(vmax, std::abs(v));
  w.max_imag_residue = vmax > 0.0 ? residue / vmax : 0.0;
  const std::size_t nf = w.freqs.size();
  w.zeroth.assign(w.times.size(), 0.0);
  for (std::size_t i = 0; i < w.times.size(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < nf; ++j) s += w.values[i * nf + j];
    w.zeroth[i] = s * w.dxi;
  }
}

}  // namespace detail

/// Wigner distribution of sampled data. Lags are even multiples of dt
/// (tau_m = 2 m dt) so f(t_n + tau/2) and f(t_n - tau/2) are grid samples;
/// missing samples are zero. Frequency axis spans [-pi/(2dt), pi/(2dt)).
/// The signal should be sampled at twice the rate its bandwidth needs.
inline WignerGrid wigner_distribution(const SignalGrid& sig) {
  sig.validate();
  const std::size_t n = sig.samples.size();
  const std::size_t len = n;
  const double dtau = 2.0 * sig.dt;
  WignerGrid w;
  w.freqs = detail::centered_freqs(len, dtau);
  w.dxi = 2.0 * std::numbers::pi / (static_cast<double>(len) * dtau);
  w.times.resize(n);
  w.values.assign(n * len, 0.0);
  Eigen::FFT<double> fft;
  std::vector<cplx> kernel(len), spectrum(len);
  double residue = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w.times[k] = sig.time(k);
    std::fill(kernel.begin(), kernel.end(), cplx{});
    const std::size_t reach = std::min(k, n - 1 - k);
    for (std::size_t m = 0; m <= reach; ++m) {
      const cplx v = sig.samples[k + m] * std::conj(sig.samples[k - m]);
      kernel[m] = v;
      if (m > 0) kernel[len - m] = std::conj(v);
    }
    residue = std::max(residue,
                       detail::wigner_slice(fft, kernel, dtau, spectrum, &w.values[k * len]));
  }
  detail::finish(w, residue);
  return w;
}

/// Wigner distribution of a signal known in closed form, evaluated directly
/// on the half-step grid: at t_k = t0 + k dt the lag kernel is
/// f(t_k + m dt/2) conj(f(t_k - m dt/2)), |m| < N/2, so the lag window spans
/// the full signal extent N dt. Frequency axis spans [-pi/dt, pi/dt).
inline WignerGrid wigner_distribution(const std::function<cplx(double)>& f, double t0, double dt,
                                      std::size_t n) {
  if (n < 8) throw DomainError("signal grid needs at least 8 samples");
  if (!(dt > 0.0)) throw DomainError("signal grid spacing must be positive");
  const std::size_t len = n;
  const double dtau = dt;
  WignerGrid w;
  w.freqs = detail::centered_freqs(len, dtau);
  w.dxi = 2.0 * std::numbers::pi / (static_cast<double>(len) * dtau);
  w.times.resize(n);
  w.values.assign(n * len, 0.0);
  Eigen::FFT<double> fft;
  std::vector<cplx> kernel(len), spectrum(len);
  double residue = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    w.times[k] = t;
    std::fill(kernel.begin(), kernel.end(), cplx{});
    const cplx f0 = f(t);
    kernel[0] = f0 * std::conj(f0);
    // |m| < len/2 keeps the kernel Hermitian, so W is real.
    for (std::size_t m = 1; 2 * m < len; ++m) {
      const double half = 0.5 * static_cast<double>(m) * dtau;
      const cplx v = f(t + half) * std::conj(f(t - half));
      kernel[m] = v;
      kernel[len - m] = std::conj(v);
    }
    residue = std::max(residue,
                       detail::wigner_slice(fft, kernel, dtau, spectrum, &w.values[k * len]));
  }
  detail::finish(w, residue);
  return w;
}

struct WignerMoments {
  double zeroth = 0.0;  // sum_j W dxi  (= 2 pi |f(t)|^2)
  double first = 0.0;   // sum_j xi W dxi
  double ratio = 0.0;
  bool well_conditioned = false;  // zeroth >= 1e-6 of the largest zeroth moment
};

inline WignerMoments wigner_moments(const WignerGrid& w, std::size_t ti) {
  if (ti >= w.times.size()) throw DomainError("time index outside the Wigner grid");
  const double global = *std::max_element(w.zeroth.begin(), w.zeroth.end());
  WignerMoments m;
  m.zeroth = w.zeroth[ti];
  for (std::size_t j = 0; j < w.freqs.size(); ++j) m.first += w.freqs[j] * w.at(ti, j);
  m.first *= w.dxi;
  if (!(m.zeroth > 1e-12 * global))
    throw SignalZeroError("Wigner zeroth moment vanishes at t=" + std::to_string(w.times[ti]));
  m.ratio = m.first / m.zeroth;
  m.well_conditioned = m.zeroth >= 1e-6 * global;
  return m;
}

/// (sum xi W dxi) / (sum W dxi) at the grid time closest to t.
inline double wigner_moment_ratio(const WignerGrid& w, double t) {
  if (w.times.empty()) throw DomainError("empty Wigner grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < w.times.size(); ++i)
    if (std::abs(w.times[i] - t) < std::abs(w.times[best] - t)) best = i;
  return wigner_moments(w, best).ratio;
}

// ---------------------------------------------------------------------------
// Wigner spectrum of atomic harmonizable processes

struct FreqAtom {
  double xi = 0.0;  // rad/s
  cplx weight{0.0, 0.0};
};

struct FreqAtomMeasure {
  double t = 0.0;
  std::vector<FreqAtom> atoms;

  cplx total() const {
    cplx s{0.0, 0.0};
    for (const auto& a : atoms) s += a.weight;
    return s;
  }
  cplx first_moment() const {
    cplx s{0.0, 0.0};
    for (const auto& a : atoms) s += a.xi * a.weight;
    return s;
  }
};

/// Each atom (xi, eta, w) maps to frequency (xi + eta)/2 with weight
/// 2 pi w exp(i t (xi - eta)); atoms closer than 1e-12 (1 + |xi|) coalesce.
/// Atoms are returned sorted by frequency.
inline FreqAtomMeasure wigner_spectrum_atoms(const SpectralAtomMeasure& measure, double t) {
  validate(measure);
  FreqAtomMeasure out{t, {}};
  for (const auto& at : measure.atoms) {
    const double xi = 0.5 * (at.xi + at.eta);
    const cplx w = 2.0 * std::numbers::pi * at.weight * std::exp(cplx(0.0, t * (at.xi - at.eta)));
    auto hit = std::find_if(out.atoms.begin(), out.atoms.end(), [&](const FreqAtom& f) {
      return std::abs(f.xi - xi) <= 1e-12 * (1.0 + std::abs(xi));
    });
    if (hit != out.atoms.end())
      hit->weight += w;
    else
      out.atoms.push_back({xi, w});
  }
  std::sort(out.atoms.begin(), out.atoms.end(),
            [](const FreqAtom& l, const FreqAtom& r) { return l.xi < r.xi; });
  return out;
}

/// Normalized first frequency moment of the Wigner spectrum at t.
inline double spectrum_moment_ratio(const SpectralAtomMeasure& measure, double t) {
  const FreqAtomMeasure f = wigner_spectrum_atoms(measure, t);
  const cplx zeroth = f.total();
  const cplx first = f.first_moment();
  double scale = 0.0;
  for (const auto& a : f.atoms) scale += std::abs(a.weight);
  if (!(zeroth.real() > 1e-12 * scale))
    throw SignalZeroError("Wigner spectrum has vanishing mass at t=" + std::to_string(t) +
                          " (E|z(t)|^2 = 0)");
  return first.real() / zeroth.real();
}

/// E psi(t) = E(x ydot - xdot y) / E|z(t)|^2 = (d1 r_yx - d2 r_yx) / r_z at (t,t).
inline double pseudo_if_mean(const CovarianceModel& model, double t) {
  const DerivBundle d = eval_cov_derivs(model, t);
  const double power = 2.0 * d.r_xx;  // r_z(t,t)
  // properness: d2 r_yx(t,t) = -d1 r_yx(t,t)
  const double numerator = 2.0 * d.d1_r_yx;
  if (!(power > 0.0)) throw SignalZeroError("E|z(t)|^2 = 0 at t=" + std::to_string(t));
  return numerator / power;
}

}  // namespace gaussif
