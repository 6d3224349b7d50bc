#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include <heatbath/error.hpp>
#include <heatbath/lattice.hpp>
#include <heatbath/statmech.hpp>

#include "oracles.hpp"

using namespace heatbath;

namespace {

ChainConfig chain(int M, double dt, double t_max, std::uint64_t seed = 1) {
  ChainConfig cfg;
  cfg.M = M;
  cfg.dt = dt;
  cfg.t_max = t_max;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(Potential, SmallStencil) {
  Matrix ref(3, 3);
  ref << 2, -1, 0, -1, 2, -1, 0, -1, 2;
  EXPECT_EQ(build_potential(1, 1.0).to_dense(), ref);
  const Tridiagonal t = build_potential(2, 2.0);
  for (double d : t.diag) EXPECT_EQ(d, 8.0);
  for (double o : t.off) EXPECT_EQ(o, -4.0);
}

TEST(Potential, SymbolFactorization) {
  const SymbolFactor f = factor_symbol(1.5);
  EXPECT_EQ(f.diag, -1.5);
  EXPECT_EQ(f.upper, 1.5);
  EXPECT_TRUE(f.matches_potential);
  ASSERT_EQ(f.product_stencil.size(), 3u);
  EXPECT_DOUBLE_EQ(f.product_stencil[1], 2 * 1.5 * 1.5);
}

TEST(Invariant, ZeroTemperatureGivesZeroState) {
  ChainConfig cfg = chain(20, 0.1, 1);
  cfg.beta = 0.0;
  const ChainState s = sample_invariant(cfg);
  EXPECT_EQ(s.q.norm(), 0.0);
  EXPECT_EQ(s.p.norm(), 0.0);
}

TEST(Invariant, MomentumVarianceAndWhitening) {
  ChainConfig cfg = chain(30, 0.1, 1);
  cfg.beta = 1.7;
  std::mt19937_64 rng(44);
  const int n = 100000;
  double p2 = 0.0;
  Eigen::Matrix3d xx = Eigen::Matrix3d::Zero();
  for (int k = 0; k < n; ++k) {
    const ChainState s = sample_invariant(cfg, rng);
    p2 += s.p(cfg.M) * s.p(cfg.M);
    Eigen::Vector3d x;
    for (int j = -1; j <= 1; ++j) x(j + 1) = cfg.c * (s.q(cfg.M + j + 1) - s.q(cfg.M + j));
    xx += x * x.transpose();
  }
  EXPECT_NEAR(p2 / n / cfg.beta, 1.0, 0.02);
  xx /= n * cfg.beta;
  // exact covariance of V* q is beta (I - 11^T / (sites + 1))
  const double shift = 1.0 / (cfg.sites() + 1);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double band = i == j ? 3 * std::sqrt(2.0 / n) : 3 / std::sqrt(double(n));
      EXPECT_NEAR(xx(i, j), (i == j ? 1.0 : 0.0) - shift, band);
    }
}

TEST(Invariant, SeedDeterminism) {
  const ChainConfig cfg = chain(50, 0.1, 1, 7);
  const ChainState a = sample_invariant(cfg), b = sample_invariant(cfg);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.p, b.p);
}

TEST(Propagator, MatchesDenseModalOracle) {
  const int n = 7;
  ChainPropagator prop(n, 1.3);
  ChainState s{Vector::LinSpaced(n, -1, 2), Vector::LinSpaced(n, 0.5, -0.4)};
  prop.load(s);
  const Matrix V2 = build_potential(3, 1.3).to_dense();
  for (int step = 0; step < 10; ++step) prop.advance(0.37);
  const auto [q, p] = oracle::chain_modes(V2, s.q, s.p, 3.7);
  const ChainState got = prop.state();
  EXPECT_LT((got.q - q).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((got.p - p).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagator, EnergyConservedOverLongRuns) {
  ChainConfig cfg = chain(400, 0.05, 390);
  const ChainState s = sample_invariant(cfg);
  const ParticleTrace tr = integrate(s, cfg);
  EXPECT_NEAR(tr.energy_end / tr.energy_start, 1.0, 1e-12);
}

TEST(Propagator, KickFollowsBesselProfile) {
  const ChainConfig cfg = chain(300, 0.05, 250);
  ChainState s{Vector::Zero(cfg.sites()), Vector::Zero(cfg.sites())};
  s.p(cfg.M) = 1.0;
  const ParticleTrace tr = integrate(s, cfg);
  for (std::size_t k = 0; k < tr.t.size(); k += 97) {
    EXPECT_NEAR(tr.p0[k], std::cyl_bessel_j(0.0, 2 * cfg.c * tr.t[k]), 1e-9) << tr.t[k];
    EXPECT_NEAR(momentum_oracle(cfg.c, tr.t[k]), std::cyl_bessel_j(0.0, 2 * cfg.c * tr.t[k]), 1e-10);
  }
  EXPECT_EQ(momentum_oracle(1.0, 0.0), 1.0);
}

TEST(Propagator, ZeroStateZeroTrace) {
  const ChainConfig cfg = chain(50, 0.1, 10);
  const ParticleTrace tr = integrate({Vector::Zero(cfg.sites()), Vector::Zero(cfg.sites())}, cfg);
  for (double p : tr.p0) EXPECT_EQ(p, 0.0);
  EXPECT_EQ(langevin_residual(tr, cfg.c).forward, 0.0);
}

TEST(Propagator, GuardRejectsReflections) { EXPECT_THROW(chain(10, 0.1, 10).validate(), ReflectionWindowError); }

TEST(Langevin, SecondOrderResidual) {
  const ChainConfig cfg = chain(500, 0.05, 50);
  ChainConfig half = cfg;
  half.dt /= 2;
  const ChainState s = sample_invariant(cfg);
  const LangevinResidual a = langevin_residual(integrate(s, cfg), cfg.c);
  const LangevinResidual b = langevin_residual(integrate(s, half), cfg.c);
  EXPECT_NEAR(a.forward / b.forward, 4.0, 0.3);
  EXPECT_NEAR(a.backward / b.backward, 4.0, 0.3);
}

TEST(Langevin, FaultIsDetected) {
  ParticleTrace tr;
  tr.dt = 0.1;
  for (int k = 0; k < 20; ++k) {
    tr.t.push_back(k * 0.1);
    tr.q0.push_back(0.0);
    tr.p0.push_back(k % 2 ? 1.0 : -1.0);
    tr.w.push_back(0.0);
    tr.w_bar.push_back(0.0);
  }
  EXPECT_GT(langevin_residual(tr, 1.0).forward, 1.0);
}

TEST(Models, EigenvaluesAndInnerQ) {
  const BrownianModels m = reduced_models(0.5);
  const auto e = eigenvalues(m.gamma), eb = eigenvalues(m.gamma_bar);
  std::vector<double> re{e[0].real(), e[1].real()}, reb{eb[0].real(), eb[1].real()};
  std::sort(re.begin(), re.end());
  std::sort(reb.begin(), reb.end());
  EXPECT_EQ(re[0], -1.0);
  EXPECT_EQ(re[1], 0.0);
  EXPECT_EQ(reb[0], 0.0);
  EXPECT_EQ(reb[1], 1.0);
  EXPECT_TRUE(is_inner(m.Q));
  EXPECT_LT(coefficient_distance(m.Q, RationalFunction(Polynomial{-1, 1}, Polynomial{1, 1})), 1e-15);
}

TEST(Autocorr, MatchesOracleAndIgnoresThreadCount) {
  ChainConfig cfg = chain(200, 0.5, 190, 3);
  const AutocorrResult one = momentum_autocorr(cfg, 6, 90, 1);
  const AutocorrResult many = momentum_autocorr(cfg, 6, 90, 3);
  EXPECT_EQ(one.empirical, many.empirical);
  EXPECT_EQ(one.oracle[0], cfg.beta);
  EXPECT_LT(one.max_deviation(), 0.15);
}

TEST(Periodicity, IsolatedChainsHaveNPeaks) {
  for (int n = 1; n <= 8; ++n)
    EXPECT_EQ(periodicity_probe(isolated_chain_series(n, 1.0, 0.1, 20000), 0.1), static_cast<std::size_t>(n)) << n;
}

TEST(Csv, ParticleHeader) {
  const ChainConfig cfg = chain(20, 0.5, 2);
  std::ostringstream os;
  write_csv(os, integrate(sample_invariant(cfg), cfg));
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "t,q0,p0,w,wbar");
}
