#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "gaussif/ifdist.hpp"
#include "gaussif/verify/oracles.hpp"

namespace gaussif {
namespace {

std::array<std::array<double, 4>, 4> to_array(const CovMatrix4& m) {
  std::array<std::array<double, 4>, 4> a{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a[i][j] = m.m(i, j);
  return a;
}

TEST(IfParams, IndependentTwoTone) {
  const IFParams p = if_params(TwoTone{1.0, 3.0, {}}, 0.7);
  EXPECT_NEAR(p.a, 1.0, 1e-15);
  EXPECT_NEAR(p.b, 2.0, 1e-15);
  EXPECT_NEAR(p.c, 0.0, 1e-15);
  EXPECT_NEAR(p.d, 5.0, 1e-14);
  EXPECT_NEAR(p.delta, 1.0, 1e-14);  // (xi - eta)^2 (1 - |c|^2) / 4
  EXPECT_EQ(p.t, 0.7);
}

TEST(IfParams, LocallyStationaryDiscriminant) {
  const double alpha = 0.5, beta = 2.0;
  for (double t : {-2.5, 0.0, 1.0}) {
    const IFParams p = if_params(LocallyStationary{alpha, beta}, t);
    EXPECT_EQ(p.b, 0.0);
    const double want = (beta - alpha) * std::exp(-4.0 * alpha * t * t);
    EXPECT_NEAR(p.delta, want, 1e-13 * want);
  }
}

TEST(IfParams, RankOneIsDegenerateAtCarrier) {
  const double omega = 1.7;
  // g = e^{i omega t} G(t), G real positive
  const IFParams p = if_params(gaussian_chirp(2.0, 0.6, omega, 0.0), 0.9);
  EXPECT_EQ(classify_regime(p), Regime::Degenerate);
  EXPECT_EQ(p.delta, 0.0);
  EXPECT_NEAR(p.b / p.a, omega, 1e-14);
}

TEST(IfParams, NegativeDiscriminantRejected) {
  EXPECT_THROW(make_if_params(1.0, 2.0, 0.0, 1.0), ParameterDomainError);
  EXPECT_THROW(make_if_params(-1.0, 0.0, 0.0, 1.0), ParameterDomainError);
  // within tolerance of zero: clamped
  const IFParams p = make_if_params(1.0, 1.0, 0.0, 1.0 - 1e-13);
  EXPECT_EQ(p.delta, 0.0);
  EXPECT_EQ(classify_regime(p), Regime::Degenerate);
}

TEST(CovMatrix, PatternAndDeterminant) {
  const CovMatrix4 id = cov_matrix(make_if_params(1, 0, 0, 1));
  EXPECT_TRUE(id.m.isApprox(Eigen::Matrix4d::Identity()));
  EXPECT_DOUBLE_EQ(oracle::cofactor_det<4>(to_array(id)), 1.0);

  const IFParams p = make_if_params(1, 0.5, 0.3, 2);
  const CovMatrix4 m = cov_matrix(p);
  EXPECT_EQ(m.m(0, 2), 0.0);
  EXPECT_EQ(m.m(1, 3), 0.0);
  EXPECT_EQ(m.m(2, 3), -0.5);
  EXPECT_TRUE(m.m.isApprox(m.m.transpose()));
  EXPECT_NEAR(oracle::cofactor_det<4>(to_array(m)), 1.66 * 1.66, 1e-13);
  EXPECT_NEAR(p.delta, 1.66, 1e-15);

  const CovMatrix4 z = cov_matrix(make_if_params(0, 0, 0, 1));
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(z.m);
  EXPECT_GE(es.eigenvalues().minCoeff(), 0.0);
  EXPECT_EQ((es.eigenvalues().array() > 1e-12).count(), 2);
}

// |M| = delta^2 for random valid parameters (cofactor oracle).
TEST(CovMatrix, DeterminantIsDeltaSquaredProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> pos(0.1, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double a = pos(rng), b = u(rng), c = u(rng);
    const double d = (b * b + c * c + pos(rng)) / a;
    const IFParams p = make_if_params(a, b, c, d);
    const double det = oracle::cofactor_det<4>(to_array(cov_matrix(p)));
    EXPECT_NEAR(det, p.delta * p.delta, 1e-11 * (1.0 + det));
  }
}

TEST(Regime, Classification) {
  EXPECT_EQ(classify_regime(make_if_params(1, 0.5, 0.3, 2)), Regime::HeavyTail);
  EXPECT_EQ(classify_regime(make_if_params(1, 1, 0, 1)), Regime::Degenerate);
  EXPECT_EQ(classify_regime(make_if_params(0, 0, 0, 1)), Regime::InfiniteIF);
}

TEST(Pdf, Values) {
  const IFParams unit = make_if_params(1, 0, 0, 1);
  EXPECT_DOUBLE_EQ(pdf(unit, 0.0), 0.5);
  EXPECT_NEAR(pdf(unit, 1.0), 0.5 * std::pow(2.0, -1.5), 1e-16);
  EXPECT_NEAR(pdf(unit, 1.0), 0.1767766952966369, 1e-15);
  const IFParams p = make_if_params(2, 1, 0, 1);
  EXPECT_DOUBLE_EQ(pdf(p, 0.5), 1.0);
  EXPECT_LT(pdf(p, 0.5 + 1e-3), 1.0);
  EXPECT_LT(pdf(p, 0.5 - 1e-3), 1.0);
}

TEST(Pdf, WrongRegimeThrows) {
  EXPECT_THROW(pdf(make_if_params(1, 1, 0, 1), 1.0), RegimeError);
  EXPECT_THROW(cdf(make_if_params(0, 0, 0, 1), 1.0), RegimeError);
  EXPECT_THROW(quantile(make_if_params(1, 1, 0, 1), 0.3), RegimeError);
}

TEST(Pdf, NormalizesToOne) {
  for (const IFParams& p : {make_if_params(1, 0.5, 0.3, 2), make_if_params(0.2, -1.0, 0.1, 9.0),
                            make_if_params(4.0, 3.0, 0.0, 2.5)}) {
    const double lo = quantile(p, 1e-6), hi = quantile(p, 1.0 - 1e-6);
    const double body = oracle::integrate([&](double y) { return pdf(p, y); }, lo, hi, 1e-13);
    EXPECT_NEAR(body + 2e-6, 1.0, 1e-8);
  }
}

TEST(Pdf, SymmetricAboutCenter) {
  const IFParams p = make_if_params(1.3, 0.7, 0.2, 2.0);
  const double m = p.b / p.a;
  for (double u : {1e-3, 0.1, 1.0, 17.0, 1e4}) {
    const double l = pdf(p, m - u), r = pdf(p, m + u);
    EXPECT_NEAR(l, r, 1e-14 * l) << u;  // m +- u itself is rounded
  }
}

TEST(Pdf, CubicTail) {
  for (const IFParams& p : {make_if_params(1, 0, 0, 1), make_if_params(1, 0.5, 0.3, 2),
                            make_if_params(0.3, 0.1, 0.2, 1.0)}) {
    const double y = 1e3 * std::sqrt(p.delta) / p.a;
    const double lim = p.delta / (2.0 * p.a * p.a);
    EXPECT_NEAR(pdf(p, y) * y * y * y / lim, 1.0, 5e-3);
  }
}

TEST(Cdf, ClosedFormMatchesQuadrature) {
  const IFParams unit = make_if_params(1, 0, 0, 1);
  EXPECT_DOUBLE_EQ(cdf(unit, 0.0), 0.5);
  EXPECT_EQ(cdf(unit, std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_NEAR(cdf(unit, 1e12), 1.0, 1e-15);
  const double oracle1 = oracle::cdf_by_quadrature([&](double y) { return pdf(unit, y); }, 1.0, 0.0);
  EXPECT_NEAR(oracle1, 0.8535533905932737, 1e-10);
  EXPECT_NEAR(cdf(unit, 1.0), oracle1, 1e-10);

  const IFParams p = make_if_params(1.3, 0.7, 0.2, 2.0);
  EXPECT_DOUBLE_EQ(cdf(p, p.b / p.a), 0.5);
  for (double y : {-30.0, -2.0, 0.1, 0.53, 4.0, 80.0}) {
    const double q =
        oracle::cdf_by_quadrature([&](double v) { return pdf(p, v); }, y, p.b / p.a);
    EXPECT_NEAR(cdf(p, y), q, 1e-9) << y;
  }
}

TEST(Quantile, InverseOfCdf) {
  const IFParams unit = make_if_params(1, 0, 0, 1);
  EXPECT_NEAR(quantile(unit, 0.5), 0.0, 1e-16);
  EXPECT_NEAR(quantile(unit, 0.853553390593273762), 1.0, 1e-12);
  const IFParams p = make_if_params(1, 0.5, 0.3, 2);
  EXPECT_DOUBLE_EQ(quantile(p, 0.5), 0.5);
  for (double q = 1e-4; q < 1.0 - 1e-4; q += 0.0137)
    EXPECT_NEAR(cdf(p, quantile(p, q)), q, 1e-12) << q;
  EXPECT_NEAR(cdf(p, quantile(p, 1e-4)), 1e-4, 1e-12);
  EXPECT_NEAR(cdf(p, quantile(p, 1 - 1e-4)), 1 - 1e-4, 1e-12);
  EXPECT_THROW(quantile(p, 0.0), DomainError);
  EXPECT_THROW(quantile(p, 1.0), DomainError);
  EXPECT_THROW(quantile(p, -0.2), DomainError);
}

TEST(Quantile, UpperTailAsymptotics) {
  const IFParams p = make_if_params(1.3, 0.7, 0.2, 2.0);
  for (double eps : {1e-6, 1e-8, 1e-10}) {
    const double q = 1.0 - eps;
    const double approx = std::sqrt(p.delta) / (p.a * std::sqrt(4.0 * (1.0 - q)));
    EXPECT_NEAR((quantile(p, q) - p.b / p.a) / approx, 1.0, 10.0 * eps + 1e-5) << eps;
  }
}

TEST(Moments, MeanAndVariance) {
  EXPECT_EQ(mean_if(make_if_params(1, 0.5, 0.3, 2)), ExtReal(0.5));
  EXPECT_NEAR(mean_if(if_params(TwoTone{1.0, 3.0, {}}, 0.0)).value(), 2.0, 1e-15);
  EXPECT_TRUE(mean_if(make_if_params(0, 0, 0, 1)).is_infinite());
  EXPECT_EQ(variance_if(make_if_params(1, 0.5, 0.3, 2)), VarianceKind::Infinite);
  EXPECT_EQ(variance_if(make_if_params(1, 1, 0, 1)), VarianceKind::Zero);
  EXPECT_EQ(variance_if(make_if_params(0, 0, 0, 1)), VarianceKind::Undefined);
  const IFDistribution dist = if_distribution(make_if_params(0, 0, 0, 1));
  EXPECT_TRUE(dist.center.is_infinite());
  EXPECT_EQ(dist.regime, Regime::InfiniteIF);
}

TEST(Property, AmplitudeScalingLeavesLawUnchanged) {
  const IFParams p = make_if_params(1.3, 0.7, 0.2, 2.0);
  for (double gamma : {0.01, 0.5, 3.0, 100.0}) {
    const double g2 = gamma * gamma;
    const IFParams s = make_if_params(g2 * p.a, g2 * p.b, g2 * p.c, g2 * p.d);
    EXPECT_EQ(classify_regime(s), classify_regime(p));
    EXPECT_NEAR(mean_if(s).value(), mean_if(p).value(), 1e-14);
    for (double y : {-3.0, 0.2, 5.0}) {
      EXPECT_NEAR(pdf(s, y), pdf(p, y), 1e-13 * pdf(p, y));
      EXPECT_NEAR(cdf(s, y), cdf(p, y), 1e-14);
    }
    EXPECT_NEAR(quantile(s, 0.9), quantile(p, 0.9), 1e-13);
  }
}

TEST(Property, ModulationShiftsLaw) {
  const IFParams p = make_if_params(1.3, 0.7, 0.2, 2.0);
  for (double w0 : {-2.0, 0.5, 4.0}) {
    const IFParams s =
        make_if_params(p.a, p.b + w0 * p.a, p.c, p.d + 2.0 * w0 * p.b + w0 * w0 * p.a);
    EXPECT_NEAR(s.delta, p.delta, 1e-13 * (1 + w0 * w0));
    EXPECT_NEAR(mean_if(s).value(), mean_if(p).value() + w0, 1e-13);
    for (double y : {-1.0, 0.3, 2.0})
      EXPECT_NEAR(pdf(s, y + w0), pdf(p, y), 1e-12 * pdf(p, y));
  }
  // end to end: shifting both two-tone frequencies by w0
  const TwoTone base{1.0, 3.0, {0.5, 0.2}};
  const double w0 = 1.5;
  const TwoTone shifted{base.xi + w0, base.eta + w0, base.corr};
  for (double t : {-1.0, 0.0, 2.0}) {
    const IFParams p0 = if_params(base, t), p1 = if_params(shifted, t);
    EXPECT_NEAR(p1.delta, p0.delta, 1e-12);
    EXPECT_NEAR(mean_if(p1).value(), mean_if(p0).value() + w0, 1e-12);
    EXPECT_NEAR(pdf(p1, 2.7 + w0), pdf(p0, 2.7), 1e-12);
  }
}

// Truncated second central moment grows by ln(10) delta / a^2 per decade.
TEST(Property, InfiniteVarianceLogGrowth) {
  const IFParams p = make_if_params(1, 0.5, 0.3, 2);
  const double m = p.b / p.a;
  auto truncated = [&](double cap) {
    return oracle::integrate([&](double y) { return (y - m) * (y - m) * pdf(p, y); }, m - cap,
                             m + cap, 1e-12);
  };
  const double expect = std::log(10.0) * p.delta / (p.a * p.a);
  for (double cap : {1e2, 1e3, 1e4}) {
    const double growth = truncated(10.0 * cap) - truncated(cap);
    EXPECT_NEAR(growth / expect, 1.0, 0.02) << cap;
  }
}

}  // namespace
}  // namespace gaussif
