#pragma once

// Seeded Monte Carlo validation of the IF law.
//
// Random streams: draws are produced in fixed-size chunks; chunk k uses an
// mt19937_64 engine seeded with splitmix64(seed, k), so results do not
// depend on how chunks are distributed over threads.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

#include <Eigen/Dense>

#include "gaussif/errors.hpp"
#include "gaussif/ext_real.hpp"
#include "gaussif/ifdist.hpp"

namespace gaussif {

inline constexpr std::string_view kRngId =
    "mt19937_64+splitmix64-chunk-substreams/std::normal_distribution";

struct SamplingOptions {
  std::size_t chunk = std::size_t{1} << 16;
  unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
}

/// Runs body(chunk_index, begin, end) over [0, n) in chunks on a small thread pool.
template <class Body>
void for_each_chunk(std::size_t n, const SamplingOptions& opt, Body&& body) {
  const std::size_t chunk = std::max<std::size_t>(opt.chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(chunks, 1)));
  auto run = [&](unsigned worker) {
    for (std::size_t k = worker; k < chunks; k += threads)
      body(k, k * chunk, std::min(n, (k + 1) * chunk));
  };
  if (threads <= 1) {
    run(0);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned w = 0; w < threads; ++w) pool.emplace_back(run, w);
}

}  // namespace detail

/// Factor L with L L^T = M from a symmetric eigen-decomposition. Eigenvalues
/// at rounding level (|lambda| <= 64 eps trace) are set to zero; rows of
/// zero-variance coordinates are zeroed exactly.
inline Eigen::Matrix4d vec4_factor(const IFParams& p) {
  const Eigen::Matrix4d m = cov_matrix(p).m;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m);
  const double trace = m.trace();
  Eigen::Vector4d lam = es.eigenvalues();
  if (lam.minCoeff() < -1e-10 * trace)
    throw ParameterDomainError("covariance matrix M is indefinite beyond tolerance");
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * trace;
  for (int i = 0; i < 4; ++i) lam[i] = lam[i] <= floor ? 0.0 : std::sqrt(lam[i]);
  Eigen::Matrix4d l = es.eigenvectors() * lam.asDiagonal();
  for (int i = 0; i < 4; ++i)
    if (m(i, i) == 0.0) l.row(i).setZero();
  return l;
}

/// n zero-mean Gaussian draws of (x, ydot, y, xdot) with covariance M(p).
inline std::vector<std::array<double, 4>> sample_vec4(const IFParams& p, std::size_t n,
                                                      std::uint64_t seed,
                                                      const SamplingOptions& opt = {}) {
  const Eigen::Matrix4d l = vec4_factor(p);
  std::vector<std::array<double, 4>> out(n);
  detail::for_each_chunk(n, opt, [&](std::size_t k, std::size_t begin, std::size_t end) {
    auto eng = detail::substream(seed, k);
    std::normal_distribution<double> normal;
    for (std::size_t i = begin; i < end; ++i) {
      const Eigen::Vector4d g(normal(eng), normal(eng), normal(eng), normal(eng));
      const Eigen::Vector4d x = l * g;
      out[i] = {x[0], x[1], x[2], x[3]};
    }
  });
  return out;
}

/// Y = (X1 X2 - X3 X4) / (X1^2 + X3^2), +inf where the denominator is exactly 0.
inline ExtReal if_from_vec4(const std::array<double, 4>& x) {
  const double den = x[0] * x[0] + x[2] * x[2];
  if (den == 0.0) return ExtReal::plus_infinity();
  return ExtReal((x[0] * x[1] - x[2] * x[3]) / den);
}

struct SampleBatch {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  IFParams params;
  std::vector<ExtReal> values;
  std::size_t n_infinite = 0;

  std::vector<double> finite_values() const {
    std::vector<double> v;
    v.reserve(values.size() - n_infinite);
    for (const auto& x : values)
      if (x.is_finite()) v.push_back(x.value());
    return v;
  }
};

inline SampleBatch sample_if(const IFParams& p, std::size_t n, std::uint64_t seed,
                             const SamplingOptions& opt = {}) {
  const auto draws = sample_vec4(p, n, seed, opt);
  SampleBatch b{seed, n, p, {}, 0};
  b.values.reserve(n);
  for (const auto& x : draws) {
    b.values.push_back(if_from_vec4(x));
    if (b.values.back().is_infinite()) ++b.n_infinite;
  }
  return b;
}

struct KsResult {
  double statistic = 0.0;
  std::size_t n_used = 0;
  std::size_t n_excluded = 0;  // infinite draws left out
};

/// sup_y |F_n(y) - F(y)| for finite values.
inline KsResult ks_distance(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw InsufficientDataError("KS distance of an empty batch");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, values.size(), 0};
}

inline KsResult ks_distance(const SampleBatch& batch, const std::function<double(double)>& cdf) {
  KsResult r = ks_distance(batch.finite_values(), cdf);
  r.n_excluded = batch.n_infinite;
  return r;
}

struct TailFit {
  double slope = 0.0;
  std::size_t points = 0;
  double u_low = 0.0;   // |y - b/a| at the lower quantile
  double u_high = 0.0;  // |y - b/a| at the upper quantile
};

/// Least-squares slope of log P(|Y - center| >= u) against log u over the
/// empirical [q_low, q_high] quantile range of |Y - center|. A density
/// decaying like |y|^-3 gives slope -2.
inline TailFit tail_exponent(std::span<const double> values, double center, double q_low = 0.99,
                             double q_high = 0.999) {
  if (values.size() < 100000)
    throw InsufficientDataError("tail fit needs at least 1e5 finite draws");
  std::vector<double> u(values.size());
  std::transform(values.begin(), values.end(), u.begin(),
                 [center](double y) { return std::abs(y - center); });
  std::sort(u.begin(), u.end());
  const std::size_t n = u.size();
  const auto lo = static_cast<std::size_t>(std::floor(q_low * static_cast<double>(n)));
  const auto hi = std::min(n - 1, static_cast<std::size_t>(std::floor(q_high * static_cast<double>(n))));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t k = lo; k <= hi; ++k) {
    if (!(u[k] > 0.0)) continue;
    const double x = std::log(u[k]);
    const double y = std::log(static_cast<double>(n - k) / static_cast<double>(n));
    sx += x, sy += y, sxx += x * x, sxy += x * y;
    ++m;
  }
  const double md = static_cast<double>(m);
  const double den = md * sxx - sx * sx;
  if (m < 10 || !(den > 1e-12 * md * sxx))
    throw InsufficientDataError("no tail: deviations from the center are (numerically) constant");
  return {(md * sxy - sx * sy) / den, m, u[lo], u[hi]};
}

inline TailFit tail_exponent(const SampleBatch& batch, double q_low = 0.99, double q_high = 0.999) {
  if (classify_regime(batch.params) != Regime::HeavyTail)
    throw InsufficientDataError("tail fit needs a heavy-tail batch");
  const auto v = batch.finite_values();
  return tail_exponent(v, batch.params.b / batch.params.a, q_low, q_high);
}

// ---------------------------------------------------------------------------
// Two-tone sample paths

struct PathEnsemble {
  std::vector<double> times;
  std::size_t m = 0;
  std::vector<cplx> samples;  // m x times.size(), row-major

  std::span<const cplx> path(std::size_t r) const {
    return {samples.data() + r * times.size(), times.size()};
  }
};

/// m realizations of X1 e^{i t xi} + X2 e^{i t eta} with unit-variance,
/// jointly proper X1, X2 and E X1 conj(X2) = corr:
/// X1 = U1, X2 = conj(corr) U1 + sqrt(1 - |corr|^2) U2, U1, U2 iid standard.
inline PathEnsemble simulate_two_tone(double xi, double eta, cplx corr, std::vector<double> tgrid,
                                      std::size_t m, std::uint64_t seed,
                                      const SamplingOptions& opt = {}) {
  if (!(std::abs(corr) < 1.0)) throw ParameterDomainError("two-tone simulation requires |corr| < 1");
  PathEnsemble e{std::move(tgrid), m, {}};
  const std::size_t nt = e.times.size();
  e.samples.assign(m * nt, cplx{});
  std::vector<cplx> tone1(nt), tone2(nt);
  for (std::size_t k = 0; k < nt; ++k) {
    tone1[k] = std::exp(cplx(0.0, e.times[k] * xi));
    tone2[k] = std::exp(cplx(0.0, e.times[k] * eta));
  }
  const double resid = std::sqrt(1.0 - std::norm(corr));
  detail::for_each_chunk(m, opt, [&](std::size_t k, std::size_t begin, std::size_t end) {
    auto eng = detail::substream(seed, k);
    std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
    for (std::size_t r = begin; r < end; ++r) {
      const cplx u1(normal(eng), normal(eng));
      const cplx u2(normal(eng), normal(eng));
      const cplx x1 = u1;
      const cplx x2 = std::conj(corr) * u1 + resid * u2;
      for (std::size_t j = 0; j < nt; ++j) e.samples[r * nt + j] = x1 * tone1[j] + x2 * tone2[j];
    }
  });
  return e;
}

struct PathIF {
  std::vector<ExtReal> values;   // +inf at gaps
  std::vector<std::size_t> gaps; // indices where a zero sample leaves the phase undefined
};

/// Discrete IF: phase increments wrapped into (-pi, pi], unwrapped, then
/// central differences (one-sided at the ends) divided by dt.
inline PathIF path_if(std::span<const cplx> path, double dt) {
  if (path.size() < 2) throw DomainError("path IF needs at least two samples");
  if (!(dt > 0.0)) throw DomainError("path IF needs a positive time step");
  const std::size_t n = path.size();
  std::vector<bool> zero(n);
  for (std::size_t k = 0; k < n; ++k) zero[k] = path[k] == cplx{};
  std::vector<double> inc(n - 1, 0.0);  // wrapped phase increment k -> k+1
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (zero[k] || zero[k + 1]) continue;
    double d = std::arg(path[k + 1] * std::conj(path[k]));
    if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
    inc[k] = d;
  }
  PathIF out;
  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k == 0 ? 0 : k - 1;
    const std::size_t hi = k + 1 == n ? n - 1 : k + 1;
    bool gap = false;
    for (std::size_t j = lo; j <= hi; ++j) gap = gap || zero[j];
    if (gap) {
      out.values[k] = ExtReal::plus_infinity();
      out.gaps.push_back(k);
      continue;
    }
    double phase = 0.0;
    for (std::size_t j = lo; j < hi; ++j) phase += inc[j];
    out.values[k] = ExtReal(phase / (static_cast<double>(hi - lo) * dt));
  }
  return out;
}

}  // namespace gaussif
