#pragma once

// Independent reference computations used by the test and acceptance suites.
// Nothing here calls the closed forms it is meant to check.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace gaussif::oracle {

/// Integral of f over (-inf, y] by exp-sinh quadrature.
inline double integrate_left_tail(const std::function<double(double)>& f, double y) {
  boost::math::quadrature::exp_sinh<double> integrator;
  double err = 0.0;
  const double v = integrator.integrate(
      f, -std::numeric_limits<double>::infinity(), y,
      std::sqrt(std::numeric_limits<double>::epsilon()) * 1e-4, &err);
  return v;
}

/// Adaptive Gauss-Kronrod integral over [lo, hi].
inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double tol = 1e-14) {
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, tol);
}

/// CDF by piecewise adaptive quadrature of a density: (-inf, c] by exp-sinh,
/// then [c, y] by Gauss-Kronrod, with c a point where the density is large.
inline double cdf_by_quadrature(const std::function<double(double)>& density, double y,
                                double anchor) {
  if (y <= anchor) return integrate_left_tail(density, y);
  return integrate_left_tail(density, anchor) + integrate(density, anchor, y);
}

/// Determinant by cofactor expansion along the first row.
template <std::size_t N>
double cofactor_det(const std::array<std::array<double, N>, N>& m) {
  if constexpr (N == 1) {
    return m[0][0];
  } else {
    double det = 0.0;
    for (std::size_t col = 0; col < N; ++col) {
      std::array<std::array<double, N - 1>, N - 1> minor{};
      for (std::size_t i = 1; i < N; ++i) {
        std::size_t cj = 0;
        for (std::size_t j = 0; j < N; ++j)
          if (j != col) minor[i - 1][cj++] = m[i][j];
      }
      det += ((col % 2) ? -1.0 : 1.0) * m[0][col] * cofactor_det<N - 1>(minor);
    }
    return det;
  }
}

/// Richardson-extrapolated central difference of a scalar function.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  const double d1 = (f(x + h) - f(x - h)) / (2.0 * h);
  const double d2 = (f(x + h / 2) - f(x - h / 2)) / h;
  return (4.0 * d2 - d1) / 3.0;
}

/// Mixed partial d^2 f / dt ds at (t, s) by nested Richardson differences.
inline double mixed_partial(const std::function<double(double, double)>& f, double t, double s,
                            double h) {
  return derivative([&](double u) { return derivative([&](double v) { return f(u, v); }, s, h); },
                    t, h);
}

}  // namespace gaussif::oracle
