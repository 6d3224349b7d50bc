#include <gtest/gtest.h>

#include <random>

#include <heatbath/coupling.hpp>
#include <heatbath/error.hpp>

#include "oracles.hpp"

using namespace heatbath;

namespace {

RationalFunction R(std::vector<double> n, std::vector<double> d) {
  return {Polynomial(std::move(n)), Polynomial(std::move(d))};
}

void expect_same(const RationalFunction& a, const RationalFunction& b, double tol = 1e-12) {
  EXPECT_LT(coefficient_distance(a, b), tol) << to_text(a) << " vs " << to_text(b);
}

const FosterSpec kCapacitor{1.0, {}};
const FosterSpec kTank{0.0, {{0.5, 1.0}}};

}  // namespace

TEST(CloseLoops, Capacitor) {
  const CoupledModelPair p = close_loops(foster_realize(kCapacitor));
  EXPECT_EQ(p.gamma(0, 0), -1.0);
  EXPECT_EQ(p.gamma_bar(0, 0), 1.0);
  EXPECT_EQ(p.input_gain(0), 2.0);
}

TEST(CloseLoops, TankEigenvalues) {
  const CoupledModelPair p = close_loops(foster_realize(kTank));
  const auto e = eigenvalues(p.gamma), eb = eigenvalues(p.gamma_bar);
  const double h = std::sqrt(3.0) / 2;
  EXPECT_NEAR(std::abs(e[0] - Complex(-0.5, -h)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(e[1] - Complex(-0.5, h)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eb[0] - Complex(0.5, -h)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eb[1] - Complex(0.5, h)), 0.0, 1e-14);
}

TEST(CloseLoops, RejectsInvalidLoad) {
  LosslessRealization r = foster_realize(kTank);
  r.ss.A(0, 0) = -0.1;
  EXPECT_THROW(close_loops(r), InvalidLoadError);
}

TEST(CloseLoops, MirrorOverRandomLoads) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 100; ++i) {
    const CoupledModelPair p = close_loops(foster_realize(random_foster(rng, 8)));
    const auto e = eigenvalues(p.gamma);
    for (const Complex& z : e) EXPECT_LT(z.real(), 0.0);
    EXPECT_LT(mirror_residual(e, eigenvalues(p.gamma_bar)), 1e-8);
  }
}

TEST(Scattering, Examples) {
  expect_same(scattering_K(R({1}, {0, 1})), R({1, -1}, {1, 1}));
  expect_same(scattering_K(R({0, 1}, {1, 0, 1})), R({-1, 1, -1}, {1, 1, 1}));
  EXPECT_TRUE(scattering_formula(RationalFunction::constant(1.0)).is_zero());
}

TEST(Scattering, Preconditions) {
  EXPECT_THROW(scattering_K(R({1}, {1, 1})), NotLosslessError);
  EXPECT_THROW(scattering_K(R({1, 0, 1}, {0, 1})), Error);  // improper
}

TEST(Scattering, StateSpaceRouteAgrees) {
  expect_same(scattering_K_statespace(close_loops(foster_realize(kCapacitor))), R({1, -1}, {1, 1}));
  expect_same(scattering_K_statespace(close_loops(foster_realize(kTank))), R({-1, 1, -1}, {1, 1, 1}));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const FosterSpec s = random_foster(rng, 8);
    const CoupledModelPair p = close_loops(foster_realize(s));
    EXPECT_LT(coefficient_distance(scattering_K_statespace(p), scattering_K(foster_to_rational(s))), 1e-8);
    EXPECT_LT(allpass_grid_residual(p.K), 1e-8);
    // poles of K are the eigenvalues of Gamma
    const auto poles = root_values(p.K.den());
    EXPECT_LT(mirror_residual(poles, eigenvalues(-p.gamma)), 1e-6);
  }
}

TEST(Scattering, AllpassOnAxisByDirectEvaluation) {
  const RationalFunction K = scattering_K(foster_to_rational({0.7, {{0.3, 0.5}, {1.2, 2.0}}}));
  for (double w = 1e-3; w < 1e3; w *= 1.7) EXPECT_NEAR(std::abs(evaluate(K, Complex(0, w))), 1.0, 1e-12);
}

TEST(Observable, CapacitorTransfers) {
  const CoupledModelPair p = close_loops(foster_realize(kCapacitor));
  const Observable o = Observable::make(p.c0, 0.0, p.c0);
  const ObservableTransfers t = observable_transfers(p, o);
  expect_same(t.W, R({2}, {1, 1}));
  expect_same(t.Wbar.inverse() * t.W, p.K);
}

TEST(Observable, TransfersMatchResolventOracle) {
  const CoupledModelPair p = close_loops(foster_realize(kTank));
  RowVector c(2);
  c << 0.3, -1.1;
  const Observable o = Observable::make(c, 0.4, p.c0);
  const ObservableTransfers t = observable_transfers(p, o);
  for (Complex s : {Complex(0.2, 0.9), Complex(2.0, -1.0)}) {
    const Complex w = 2.0 * oracle::resolvent(p.gamma, p.b0, o.h, o.d, s);
    const Complex wb = -2.0 * oracle::resolvent(p.gamma_bar, p.b0, o.h_bar, o.d, s);
    EXPECT_NEAR(std::abs(evaluate(t.W, s) - w), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(evaluate(t.Wbar, s) - wb), 0.0, 1e-12);
  }
}

TEST(Observable, ZeroObservableIsDegenerate) {
  const CoupledModelPair p = close_loops(foster_realize(kCapacitor));
  EXPECT_THROW(observable_transfers(p, Observable::make(RowVector::Zero(1), 0.0, p.c0)), DegenerateInputError);
}

TEST(Observable, InvarianceOverRandomObservables) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  for (int i = 0; i < 30; ++i) {
    const CoupledModelPair p = close_loops(foster_realize(random_foster(rng, 8)));
    for (int j = 0; j < 5; ++j) {
      RowVector c(p.gamma.rows());
      for (auto& x : c) x = g(rng);
      const ObservableTransfers t = observable_transfers(p, Observable::make(c, g(rng), p.c0));
      EXPECT_LT(coefficient_distance(t.Wbar.inverse() * t.W, p.K), 1e-8);
    }
  }
}

TEST(Invert, Examples) {
  expect_same(invert_K_to_Z(R({1, -1}, {1, 1})).impedance, R({1}, {0, 1}));
  const Inversion shorted = invert_K_to_Z(RationalFunction::constant(-1.0));
  EXPECT_TRUE(shorted.short_circuit);
  EXPECT_TRUE(shorted.impedance.is_zero());
  expect_same(invert_K_to_Z(R({-1, 1, -1}, {1, 1, 1})).impedance, R({0, 1}, {1, 0, 1}));
}

TEST(Invert, RejectsNonInner) {
  EXPECT_THROW(invert_K_to_Z(R({1}, {1, 1})), NotInnerError);
  EXPECT_THROW(invert_K_to_Z(RationalFunction::constant(1.0)), Error);
}

TEST(Invert, FosterDecomposition) {
  const FosterSpec s = foster_decompose(R({1, 0, 2}, {0, 1, 0, 1}));
  EXPECT_NEAR(s.k0, 1.0, 1e-12);
  ASSERT_EQ(s.tanks.size(), 1u);
  EXPECT_NEAR(s.tanks[0].k, 0.5, 1e-12);
  EXPECT_NEAR(s.tanks[0].omega, 1.0, 1e-12);
  EXPECT_THROW(foster_decompose(R({0, -1}, {1, 0, 1})), Error);
}

TEST(SpectrumToBath, FirstOrderDensity) {
  const BathSynthesis b = spectrum_to_bath(R({1}, {1, 0, -1}));
  expect_same(b.factors.W, R({1}, {1, 1}));
  expect_same(b.K, R({1, -1}, {1, 1}));
  expect_same(b.Z0, R({1}, {0, 1}));
  EXPECT_NEAR(b.foster.k0, 1.0, 1e-12);
  EXPECT_TRUE(b.foster.tanks.empty());
  EXPECT_LT(b.spectrum_residual, 1e-12);
}

TEST(SpectrumToBath, ConstantDensityIsImproper) {
  try {
    spectrum_to_bath(RationalFunction::constant(1.0));
    FAIL() << "expected an error";
  } catch (const ImproperResultError& e) {
    EXPECT_FALSE(e.stage().empty());
  }
}

TEST(SpectrumToBath, RecoversKnownLoads) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> d(0.2, 1.0);
  std::normal_distribution<double> g;
  for (int i = 0; i < 25; ++i) {
    const FosterSpec s = random_foster(rng, 4);
    const CoupledModelPair p = close_loops(foster_realize(s));
    RowVector c(p.gamma.rows());
    for (auto& x : c) x = g(rng);
    const Observable o = Observable::make(c, d(rng), p.c0);
    const BathSynthesis b = spectrum_to_bath(observable_spectrum(p, o));
    EXPECT_LT(coefficient_distance(b.Z0, foster_to_rational(s)), 1e-7) << to_text(s);
    // the synthesized observable reproduces the density on the axis
    const RationalFunction phi = observable_spectrum(b.pair, b.observable);
    EXPECT_LT(coefficient_distance(phi, observable_spectrum(p, o)), 1e-6);
  }
}
