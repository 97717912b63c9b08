#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gaussif/classify.hpp"

namespace gaussif {
namespace {

TEST(Grid, Construction) {
  const auto g = make_grid(-10.0, 10.0, 0.1);
  ASSERT_EQ(g.size(), 201u);
  EXPECT_EQ(g.front(), -10.0);
  EXPECT_NEAR(g.back(), 10.0, 1e-12);
  EXPECT_EQ(make_grid(0.0, 1.0, 0.3).size(), 4u);
  EXPECT_THROW(make_grid(1.0, 1.0, 0.1), DomainError);
  EXPECT_THROW(make_grid(0.0, 1.0, 0.0), DomainError);
}

TEST(Scan, CorrelatedTwoToneIsHeavyTailEverywhere) {
  const cplx corr{0.5, 0.2};
  const TimePartition p = scan_time_axis(TwoTone{1.0, 3.0, corr}, -10.0, 10.0, 0.1);
  ASSERT_EQ(p.intervals.size(), 1u);
  EXPECT_EQ(p.intervals[0].regime, Regime::HeavyTail);
  EXPECT_FALSE(p.mixed());
  const double want = 4.0 * (1.0 - std::norm(corr)) / 4.0;
  for (const auto& q : p.params) EXPECT_NEAR(q.delta, want, 1e-12 * want);
  EXPECT_NEAR(p.min_delta, want, 1e-12);
}

TEST(Scan, RankOneIsDegenerateEverywhere) {
  const TimePartition p = scan_time_axis(gaussian_chirp(1.0, 0.3, 0.5, 1.0), -3.0, 3.0, 0.25);
  ASSERT_EQ(p.intervals.size(), 1u);
  EXPECT_EQ(p.intervals[0].regime, Regime::Degenerate);
  EXPECT_EQ(p.max_delta, 0.0);
}

TEST(Scan, MixedPartitionFromAtoms) {
  // z = A (1 - e^{2it}): IF a point mass except at zeros t = k pi where z = 0
  SpectralAtomMeasure m{{{0.0, 0.0, {1, 0}}, {2.0, 2.0, {1, 0}}, {0.0, 2.0, {-1, 0}},
                         {2.0, 0.0, {-1, 0}}}};
  const TimePartition p = scan_time_axis(AtomicSpectral{m}, -1.0, 1.0, 0.5);
  ASSERT_EQ(p.labels.size(), 5u);
  EXPECT_EQ(p.labels[2], Regime::InfiniteIF);
  EXPECT_EQ(p.labels[0], Regime::Degenerate);
  EXPECT_EQ(p.intervals.size(), 3u);
  EXPECT_TRUE(p.mixed());
  EXPECT_EQ(p.intervals[1].start, 0.0);
  EXPECT_EQ(p.intervals[1].end, 0.0);
}

TEST(Scan, LocallyStationaryIsHeavyTail) {
  const TimePartition p = scan_time_axis(LocallyStationary{0.5, 2.0}, -3.0, 3.0, 0.01);
  EXPECT_EQ(p.intervals.size(), 1u);
  EXPECT_EQ(p.intervals[0].regime, Regime::HeavyTail);
  const TimePartition eq = scan_time_axis(LocallyStationary{1.0, 1.0}, -1.0, 1.0, 0.5);
  EXPECT_EQ(eq.intervals[0].regime, Regime::Degenerate);
}

TEST(Scan, FailuresCarryTheTime) {
  NumericCov bad;
  bad.r_x = [](double t, double s) { return t > 0.6 ? std::nan("") : std::exp(-(t - s) * (t - s)); };
  bad.r_yx = [](double, double) { return 0.0; };
  try {
    scan_time_axis(bad, 0.0, 1.0, 0.25);
    FAIL() << "expected ScanError";
  } catch (const ScanError& e) {
    EXPECT_EQ(e.time(), 0.75);
  }
  EXPECT_THROW(scan_grid(bad, std::vector<double>{}), DomainError);
}

TEST(AsWss, Views) {
  EXPECT_TRUE(as_wss(TwoTone{1.0, 3.0, {}}).has_value());
  EXPECT_FALSE(as_wss(TwoTone{1.0, 3.0, {0.1, 0.0}}).has_value());
  EXPECT_FALSE(as_wss(LocallyStationary{0.5, 2.0}).has_value());
  const auto w = as_wss(TwoTone{1.0, 3.0, {}});
  // the stationary view reproduces the model covariance
  const CovarianceModel model{TwoTone{1.0, 3.0, {}}};
  for (double t : {-1.0, 0.3})
    for (double s : {0.0, 2.0})
      EXPECT_NEAR(std::abs(eval_cov(CovarianceModel{*w}, t, s) - eval_cov(model, t, s)), 0.0, 1e-14);
}

TEST(Dichotomy, CosineWithMatchedSineIsWholeLine) {
  const Wss w{LagFunction::cosine(1.0, 1.0), LagFunction::sine(1.0, 1.0)};
  const auto grid = make_grid(-20.0, 20.0, 0.01);
  const DichotomyReport r = wss_dichotomy_check(w, grid);
  EXPECT_EQ(r.verdict, DichotomyReport::Verdict::WholeLine);
  EXPECT_EQ(to_string(r.verdict), "T=R");
  EXPECT_NEAR(r.beta, 1.0, 1e-8);
  EXPECT_LE(r.max_cos_deviation, 1e-10);
  EXPECT_TRUE(r.infinite_set_empty);
}

TEST(Dichotomy, CosineAloneIsHeavyTail) {
  // rho_yx = 0: derivative and signal decouple, delta = rho_x(0) (-rho_x''(0)) > 0
  const Wss w{LagFunction::cosine(1.0, 1.0), LagFunction::zero()};
  const DichotomyReport r = wss_dichotomy_check(w, make_grid(-5.0, 5.0, 0.5));
  EXPECT_EQ(r.verdict, DichotomyReport::Verdict::EmptySet);
  EXPECT_NEAR(r.delta0, 1.0, 1e-15);
}

TEST(Dichotomy, IndependentTwoToneIsEmptySet) {
  const DichotomyReport r = wss_dichotomy_check(TwoTone{1.0, 3.0, {}}, make_grid(-5.0, 5.0, 0.5));
  EXPECT_EQ(r.verdict, DichotomyReport::Verdict::EmptySet);
  EXPECT_EQ(to_string(r.verdict), "T=empty");
  EXPECT_NEAR(r.delta0, 1.0, 1e-14);
  EXPECT_GT(r.max_cos_deviation, 0.1);
}

TEST(Dichotomy, NonStationaryRejected) {
  const std::vector<double> g{0.0};
  EXPECT_THROW(wss_dichotomy_check(LocallyStationary{0.5, 2.0}, g), ParameterDomainError);
  EXPECT_THROW(wss_dichotomy_check(TwoTone{1.0, 3.0, {0.5, 0.0}}, g), ParameterDomainError);
}

// Random line spectra and Gaussian lag kernels never split the axis.
TEST(Property, StationaryModelsNeverMix) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  const auto grid = make_grid(-50.0, 50.0, 0.01);
  for (int rep = 0; rep < 12; ++rep) {
    Wss w{LagFunction::zero(), LagFunction::zero()};
    const int lines = 1 + rep % 3;
    for (int k = 0; k < lines; ++k) {
      const double p = u(rng), f = u(rng) - 1.5;
      w.rho_x = w.rho_x + LagFunction::cosine(p, f);
      w.rho_yx = w.rho_yx + LagFunction::sine(p, f);
    }
    if (rep % 4 == 3) w.rho_x = w.rho_x + LagFunction::gaussian(u(rng), u(rng));
    const TimePartition p = scan_grid(w, grid);
    EXPECT_FALSE(p.mixed()) << rep;
    const DichotomyReport r = wss_dichotomy_check(w, grid);
    EXPECT_EQ(r.verdict == DichotomyReport::Verdict::WholeLine,
              p.labels[0] == Regime::Degenerate);
    if (lines == 1 && rep % 4 != 3) {
      EXPECT_EQ(r.verdict, DichotomyReport::Verdict::WholeLine);
    }
  }
}

}  // namespace
}  // namespace gaussif
