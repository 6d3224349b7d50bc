#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include <heatbath/error.hpp>
#include <heatbath/statmech.hpp>

#include "oracles.hpp"

using namespace heatbath;

TEST(MaxwellBoltzmann, MeanKineticEnergy) {
  const MBParams p{2.0, 0.7, 1.0};
  const auto v = sample_mb(p, 100000, 1);
  double ke = 0.0;
  for (double x : v) ke += 0.5 * p.mass * x * x;
  EXPECT_NEAR(ke / v.size() / (1.5 * p.kT), 1.0, 0.02);
  EXPECT_NEAR(mb_mean_kinetic(p), 1.5 * p.kT, 1e-8);
}

TEST(MaxwellBoltzmann, ComponentVarianceScales) {
  auto var = [](const std::vector<double>& x) {
    double s = 0;
    for (double v : x) s += v * v;
    return s / x.size();
  };
  const auto a = sample_mb_components({1.0, 1.0, 1.0}, 100000, 5);
  const auto b = sample_mb_components({1.0, 4.0, 1.0}, 100000, 6);
  EXPECT_NEAR(var(b) / var(a), 4.0, 4.0 * 0.03);
}

TEST(MaxwellBoltzmann, FixedSeedIsBitIdentical) {
  EXPECT_EQ(sample_mb({1, 1, 1}, 1000, 9), sample_mb({1, 1, 1}, 1000, 9));
  EXPECT_NE(sample_mb({1, 1, 1}, 1000, 9), sample_mb({1, 1, 1}, 1000, 10));
}

TEST(MaxwellBoltzmann, DensityMatchesOracle) {
  for (double v : {0.1, 1.0, 2.5}) EXPECT_NEAR(mb_speed_pdf({1, 1.3, 1}, v), oracle::mb_pdf(1.3, v), 1e-14);
  EXPECT_NEAR(mb_normalization({1, 1.3, 1}), 1.0, 1e-10);
  EXPECT_THROW(MBParams({0.0, 1.0, 1.0}).validate(), DomainError);
}

TEST(MaxwellBoltzmann, KSAgainstChiSquared) {
  const MBParams p{1, 1, 1};
  const auto v = sample_mb(p, 100000, 3);
  std::vector<double> x;
  for (double s : v) x.push_back(s * s);
  EXPECT_LT(ks_statistic_chi2_3(x), ks_critical_1pct(x.size()));
  for (double& s : x) s *= 1.1;
  EXPECT_GT(ks_statistic_chi2_3(x), ks_critical_1pct(x.size()));
}

TEST(KL, Examples) {
  EXPECT_EQ(kl_mb(1.3, 1.3), 0.0);
  EXPECT_NEAR(kl_mb(2.0, 1.0), 1.5 * (2 - 1 - std::log(2.0)), 1e-15);
  EXPECT_NEAR(kl_mb(2.0, 1.0), 0.4603, 1e-4);
  for (double a : {0.3, 1.0, 5.0})
    for (double b : {0.4, 1.1, 4.0}) EXPECT_GT(kl_mb(a, b), 0.0);
}

TEST(KL, ClosedFormMatchesIndependentQuadrature) {
  for (double a : {0.5, 1.0, 3.0})
    for (double b : {0.7, 2.0}) {
      const double ref = oracle::simpson(
          [&](double v) {
            return oracle::mb_pdf(a, v) * (oracle::mb_log_pdf(a, v) - oracle::mb_log_pdf(b, v));
          },
          1e-9, 40.0, 40000);
      EXPECT_NEAR(kl_mb(a, b), ref, 1e-8);
      EXPECT_NEAR(kl_mb_quadrature(a, b), ref, 1e-6);
    }
}

TEST(Entropy, NegentropyClosedForm) {
  const MBParams p{1.0, 2.0, 1.0};
  EXPECT_NEAR(negentropy_mb(p), negentropy_mb_closed(p), 1e-8);
  EXPECT_NEAR(negentropy_mb({1.0, 4.0, 1.0}) - negentropy_mb(p), -1.5 * std::log(2.0), 1e-8);
}

TEST(Series, WhiteNoiseInsideBand) {
  std::mt19937_64 rng(12);
  std::normal_distribution<double> g;
  std::vector<double> x(20000);
  for (double& v : x) v = g(rng);
  const SeriesStats s = autocovariance(x, 200);
  EXPECT_GE(s.fraction_inside_band(), 0.95);
  EXPECT_NEAR(s.acov[0], 1.0, 0.05);
}

TEST(Series, ConstantHasZeroAutocovariance) {
  const SeriesStats s = autocovariance(std::vector<double>(1000, 3.5), 50);
  for (double a : s.acov) EXPECT_NEAR(a, 0.0, 1e-12);
}

TEST(Series, CosineHasOnePeak) {
  const double dt = 0.05, w = 2.3;
  std::vector<double> x(8192);
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = std::cos(w * k * dt);
  const Periodogram p = periodogram(x, dt);
  const auto peaks = spectral_peaks(p, 1e-3);
  ASSERT_EQ(peaks.size(), 1u);
  EXPECT_NEAR(p.freq[peaks[0]], w, 2 * (p.freq[1] - p.freq[0]));
}

TEST(Series, ShortSeriesRejected) { EXPECT_THROW(autocovariance(std::vector<double>(10, 1.0), 5), Error); }
