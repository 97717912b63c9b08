#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gaussif/montecarlo.hpp"

namespace gaussif {
namespace {

const IFParams kHeavy = make_if_params(1.0, 0.5, 0.3, 2.0);

double median(std::vector<double> v) {
  std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
  return v[v.size() / 2];
}

TEST(Vec4, EmpiricalCovarianceMatchesM) {
  const std::size_t n = 400000;
  const auto draws = sample_vec4(kHeavy, n, 17);
  Eigen::Matrix4d s = Eigen::Matrix4d::Zero();
  for (const auto& x : draws) {
    const Eigen::Vector4d v(x[0], x[1], x[2], x[3]);
    s += v * v.transpose();
  }
  s /= static_cast<double>(n);
  const Eigen::Matrix4d m = cov_matrix(kHeavy).m;
  // entry-wise: sd of a sample second moment is about sqrt(2 m_ii m_jj / n) <= 5e-3
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_NEAR(s(i, j), m(i, j), 0.015) << i << "," << j;
  EXPECT_NEAR(s(0, 2), 0.0, 0.01);
  EXPECT_NEAR(s(1, 3), 0.0, 0.015);
}

TEST(Vec4, FactorReproducesM) {
  for (const IFParams& p : {kHeavy, make_if_params(1, 1, 0, 1), make_if_params(0, 0, 0, 1),
                            make_if_params(2.0, 0.3, 0.0, 0.1)}) {
    const Eigen::Matrix4d l = vec4_factor(p);
    EXPECT_LT((l * l.transpose() - cov_matrix(p).m).norm(), 1e-13 * (1 + cov_matrix(p).m.norm()));
  }
}

TEST(Sampling, ReproducibleAcrossThreadCounts) {
  const std::size_t n = 50000;
  SamplingOptions one{1000, 1};
  SamplingOptions four{1000, 4};
  const SampleBatch a = sample_if(kHeavy, n, 99, one);
  const SampleBatch b = sample_if(kHeavy, n, 99, four);
  ASSERT_EQ(a.values.size(), n);
  for (std::size_t i = 0; i < n; ++i) ASSERT_EQ(a.values[i], b.values[i]) << i;
  const SampleBatch c = sample_if(kHeavy, n, 100, one);
  EXPECT_FALSE(a.values[0] == c.values[0] && a.values[1] == c.values[1]);
  EXPECT_EQ(a.seed, 99u);
}

TEST(Sampling, DegenerateIsPointMass) {
  const IFParams p = make_if_params(1, 1, 0, 1);
  const SampleBatch b = sample_if(p, 100000, 3);
  EXPECT_EQ(b.n_infinite, 0u);
  const double scale = std::abs(p.b / p.a) + std::sqrt(p.d / p.a);
  for (const auto& y : b.values) ASSERT_LE(std::abs(y.value() - 1.0), 1e-7 * scale);
  EXPECT_THROW(tail_exponent(b), InsufficientDataError);
}

TEST(Sampling, InfiniteRegimeGivesSentinel) {
  const SampleBatch b = sample_if(make_if_params(0, 0, 0, 1), 10000, 3);
  EXPECT_EQ(b.n_infinite, b.n);
  for (const auto& y : b.values) ASSERT_TRUE(y.is_infinite());
  EXPECT_THROW(ks_distance(b, [](double) { return 0.5; }), InsufficientDataError);
}

TEST(Sampling, HeavyTailMatchesClosedForm) {
  const SampleBatch b = sample_if(kHeavy, 200000, 2024);
  EXPECT_EQ(b.n_infinite, 0u);
  const auto v = b.finite_values();
  EXPECT_NEAR(median(v), 0.5, 0.01);
  const KsResult ks = ks_distance(b, [](double y) { return cdf(kHeavy, y); });
  EXPECT_EQ(ks.n_used, b.n);
  EXPECT_LT(ks.statistic, 0.005);
  // a wrongly centred law is rejected
  const IFParams off = make_if_params(1.0, 3.0, 0.3, 11.0);
  EXPECT_GT(ks_distance(b, [&](double y) { return cdf(off, y); }).statistic, 0.3);
}

TEST(Ks, KnownValues) {
  const KsResult r = ks_distance(std::vector<double>{0.5}, [](double y) { return y; });
  EXPECT_DOUBLE_EQ(r.statistic, 0.5);
  const KsResult u =
      ks_distance(std::vector<double>{0.125, 0.375, 0.625, 0.875}, [](double y) { return y; });
  EXPECT_DOUBLE_EQ(u.statistic, 0.125);
  EXPECT_THROW(ks_distance(std::vector<double>{}, [](double y) { return y; }), InsufficientDataError);
}

TEST(Tail, SlopeIsMinusTwo) {
  const SampleBatch b = sample_if(kHeavy, 1000000, 8);
  const TailFit f = tail_exponent(b);
  EXPECT_NEAR(f.slope, -2.0, 0.2);
  EXPECT_GT(f.u_high, f.u_low);
  EXPECT_GT(f.points, 9000u);
}

// Exact draws from the closed-form law via the quantile: the estimator
// itself is unbiased to within 0.05 at 1e7 draws.
TEST(Tail, EstimatorOnQuantileResampling) {
  const std::size_t n = 10000000;
  std::vector<double> v(n);
  auto eng = detail::substream(4, 0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& y : v) {
    double q = u(eng);
    while (q == 0.0) q = u(eng);
    y = quantile(kHeavy, q);
  }
  EXPECT_NEAR(tail_exponent(v, 0.5).slope, -2.0, 0.05);
  EXPECT_THROW(tail_exponent(std::span<const double>(v.data(), 1000), 0.5), InsufficientDataError);
}

TEST(TwoTonePaths, EnsembleCovarianceAndProperness) {
  const cplx corr{0.5, 0.2};
  const std::vector<double> times{-0.7, 0.0, 1.3};
  const std::size_t m = 200000;
  const PathEnsemble e = simulate_two_tone(1.0, 3.0, corr, times, m, 12);
  ASSERT_EQ(e.samples.size(), m * times.size());
  const CovarianceModel model{TwoTone{1.0, 3.0, corr}};
  for (std::size_t i = 0; i < times.size(); ++i)
    for (std::size_t j = 0; j < times.size(); ++j) {
      cplx rz{}, pz{};
      for (std::size_t r = 0; r < m; ++r) {
        const auto p = e.path(r);
        rz += p[i] * std::conj(p[j]);
        pz += p[i] * p[j];
      }
      rz /= static_cast<double>(m);
      pz /= static_cast<double>(m);
      EXPECT_NEAR(std::abs(rz - eval_cov(model, times[i], times[j])), 0.0, 0.02);
      EXPECT_NEAR(std::abs(pz), 0.0, 0.02);  // E z(t) z(s) = 0
    }
  EXPECT_THROW(simulate_two_tone(1.0, 3.0, {1.0, 0.0}, times, 10, 1), ParameterDomainError);
}

TEST(TwoTonePaths, ReproducibleAcrossThreadCounts) {
  const std::vector<double> times{0.0, 0.5};
  const PathEnsemble a = simulate_two_tone(1.0, 3.0, {0.5, 0.0}, times, 5000, 7, {256, 1});
  const PathEnsemble b = simulate_two_tone(1.0, 3.0, {0.5, 0.0}, times, 5000, 7, {256, 3});
  EXPECT_EQ(a.samples, b.samples);
}

TEST(PathIf, ToneAndWrapping) {
  const double dt = 0.01;
  std::vector<cplx> tone(400);
  for (std::size_t k = 0; k < tone.size(); ++k)
    tone[k] = 3.0 * std::exp(cplx(0.0, 2.0 * dt * static_cast<double>(k)));
  const PathIF p = path_if(tone, dt);
  EXPECT_TRUE(p.gaps.empty());
  for (const auto& v : p.values) EXPECT_NEAR(v.value(), 2.0, 1e-10);

  // fast rotation: increments approach pi without aliasing
  const double w = 3.0 / dt;
  for (std::size_t k = 0; k < tone.size(); ++k)
    tone[k] = std::exp(cplx(0.0, -w * dt * static_cast<double>(k)));
  for (const auto& v : path_if(tone, dt).values) EXPECT_NEAR(v.value(), -w, 1e-8);

  std::vector<cplx> gap{{1, 0}, {1, 0}, {0, 0}, {1, 0}, {1, 0}, {1, 0}};
  const PathIF g = path_if(gap, 0.1);
  EXPECT_EQ(g.gaps, (std::vector<std::size_t>{1, 2, 3}));
  EXPECT_TRUE(g.values[2].is_infinite());
  EXPECT_NEAR(g.values[5].value(), 0.0, 1e-15);
  EXPECT_THROW(path_if(std::vector<cplx>{{1, 0}}, 0.1), DomainError);
}

TEST(PathIf, PooledValuesFollowTheLaw) {
  const double dt = 1e-3;
  const cplx corr{0.5, 0.0};
  const PathEnsemble e = simulate_two_tone(1.0, 3.0, corr, {-dt, 0.0, dt}, 50000, 21);
  std::vector<double> pooled;
  for (std::size_t r = 0; r < e.m; ++r) {
    const PathIF f = path_if(e.path(r), dt);
    if (f.values[1].is_finite()) pooled.push_back(f.values[1].value());
  }
  const IFParams p = if_params(CovarianceModel{TwoTone{1.0, 3.0, corr}}, 0.0);
  EXPECT_NEAR(p.delta, 0.75, 1e-14);
  EXPECT_LT(ks_distance(pooled, [&](double y) { return cdf(p, y); }).statistic, 0.02);
}

}  // namespace
}  // namespace gaussif
