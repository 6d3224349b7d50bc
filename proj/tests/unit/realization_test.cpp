#include <gtest/gtest.h>

#include <random>

#include <heatbath/error.hpp>
#include <heatbath/realization.hpp>

#include "oracles.hpp"

using namespace heatbath;

namespace {

RationalFunction R(std::vector<double> n, std::vector<double> d) {
  return {Polynomial(std::move(n)), Polynomial(std::move(d))};
}

FosterSpec spec(double k0, std::vector<Tank> tanks = {}) { return {k0, std::move(tanks)}; }

}  // namespace

TEST(Foster, Capacitor) { EXPECT_LT(coefficient_distance(foster_to_rational(spec(1)), R({1}, {0, 1})), 1e-15); }

TEST(Foster, SingleTank) {
  EXPECT_LT(coefficient_distance(foster_to_rational(spec(0, {{0.5, 1}})), R({0, 1}, {1, 0, 1})), 1e-15);
}

TEST(Foster, CapacitorAndTank) {
  EXPECT_LT(coefficient_distance(foster_to_rational(spec(1, {{0.5, 1}})), R({1, 0, 2}, {0, 1, 0, 1})), 1e-15);
}

TEST(Foster, Validation) {
  EXPECT_THROW(spec(0).validate(), DegenerateInputError);
  EXPECT_THROW(spec(-1).validate(), DomainError);
  EXPECT_THROW(spec(0, {{1, 0}}).validate(), DomainError);
  EXPECT_THROW(spec(0, {{1, 1}, {1, 1}}).validate(), DomainError);
}

TEST(Foster, ParseAndPrint) {
  const FosterSpec s = parse_foster("k0 = 1; tank = 0.5,1; tank = 2, 3");
  EXPECT_EQ(s.k0, 1.0);
  ASSERT_EQ(s.tanks.size(), 2u);
  EXPECT_EQ(s.tanks[1].k, 2.0);
  EXPECT_EQ(s.tanks[1].omega, 3.0);
  const FosterSpec back = parse_foster(to_text(s));
  EXPECT_EQ(back.k0, s.k0);
  EXPECT_EQ(back.tanks.size(), 2u);
  EXPECT_EQ(parse_foster("k0=1").k0, 1.0);
  EXPECT_THROW(parse_foster("k0 = x"), ParseError);
  EXPECT_THROW(parse_foster("r = 1"), ParseError);
  EXPECT_THROW(parse_foster("tank = 1"), ParseError);
}

TEST(Realize, Capacitor) {
  const LosslessRealization r = foster_realize(spec(1));
  EXPECT_EQ(r.ss.A, Matrix::Zero(1, 1));
  EXPECT_EQ(r.ss.b(0), 1.0);
  EXPECT_EQ(r.ss.c(0), 1.0);
  EXPECT_EQ(r.omega, Matrix::Identity(1, 1));
}

TEST(Realize, Tank) {
  const LosslessRealization r = foster_realize(spec(0, {{0.5, 1}}));
  Matrix A(2, 2);
  A << 0, 1, -1, 0;
  EXPECT_EQ(r.ss.A, A);
  EXPECT_EQ(r.ss.b, Vector::Unit(2, 1));
  EXPECT_EQ(r.ss.c, RowVector::Unit(2, 1));
  EXPECT_EQ(r.omega, Matrix::Identity(2, 2));
  EXPECT_EQ((r.ss.A + r.ss.A.transpose()).norm(), 0.0);
}

TEST(Realize, StateDimension) { EXPECT_EQ(foster_realize(spec(1, {{0.5, 1}})).ss.dim(), 3); }

TEST(Realize, TransferMatchesResolventOracle) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const FosterSpec s = random_foster(rng, 8);
    EXPECT_LE(s.state_dim(), 8);
    const LosslessRealization r = foster_realize(s);
    const RationalFunction Z = foster_to_rational(s);
    for (Complex pt : {Complex(0.1, 0.37), Complex(-0.5, 2.2), Complex(1.0, -5.0)}) {
      const Complex ref = oracle::resolvent(r.ss.A, r.ss.b, r.ss.c, r.ss.d, pt);
      EXPECT_NEAR(std::abs(evaluate(Z, pt) - ref), 0.0, 1e-10 * (1 + std::abs(ref)));
      EXPECT_NEAR(std::abs(evaluate(transfer_function(r.ss), pt) - ref), 0.0, 1e-9 * (1 + std::abs(ref)));
    }
    EXPECT_TRUE(verify_lossless_certificate(r).valid());
    EXPECT_TRUE(is_lossless_pr(Z));
  }
}

TEST(Certificate, ExactForCanonicalForms) {
  for (const FosterSpec& s : {spec(1), spec(0, {{0.5, 1}})}) {
    const CertificateReport c = verify_lossless_certificate(foster_realize(s));
    EXPECT_EQ(c.lyapunov_residual, 0.0);
    EXPECT_EQ(c.port_residual, 0.0);
    EXPECT_EQ(c.max_abs_real_eig, 0.0);
    EXPECT_TRUE(c.omega_positive);
    EXPECT_TRUE(c.valid());
  }
}

TEST(Certificate, PerturbationIsReported) {
  LosslessRealization r = foster_realize(spec(0, {{0.5, 1}}));
  r.ss.A(0, 1) += 1e-3;
  const CertificateReport c = verify_lossless_certificate(r);
  EXPECT_NEAR(c.lyapunov_residual, 1e-3, 2e-4);
  EXPECT_FALSE(c.valid());
}

TEST(Certificate, UncontrollableModeHasZeroMargin) {
  LosslessRealization r = foster_realize(spec(1, {{0.5, 1}}));
  r.ss.b(2) = 0.0;
  r.ss.c(2) = 0.0;
  EXPECT_LT(verify_lossless_certificate(r).controllability_margin, 1e-12);
  EXPECT_FALSE(verify_lossless_certificate(r).valid());
}

TEST(Transfer, Examples) {
  StateSpace cap{Matrix::Zero(1, 1), Vector::Ones(1), RowVector::Ones(1), 0.0};
  EXPECT_LT(coefficient_distance(transfer_function(cap), R({1}, {0, 1})), 1e-15);
  const LosslessRealization tank = foster_realize(spec(0, {{0.5, 1}}));
  EXPECT_LT(coefficient_distance(transfer_function(tank.ss), R({0, 1}, {1, 0, 1})), 1e-14);
  StateSpace lag{-Matrix::Ones(1, 1), Vector::Ones(1), RowVector::Ones(1), 1.0};
  EXPECT_LT(coefficient_distance(transfer_function(lag), R({2, 1}, {1, 1})), 1e-14);
}

TEST(Transfer, ShapeMismatchThrows) {
  StateSpace bad{Matrix::Zero(2, 2), Vector::Ones(1), RowVector::Ones(2), 0.0};
  EXPECT_THROW(bad.validate(), LengthMismatchError);
}

TEST(Eigen, ConjugatePairsAreExact) {
  Matrix A(2, 2);
  A << 0, 1, -1, -1;
  const auto e = eigenvalues(A);
  ASSERT_EQ(e.size(), 2u);
  EXPECT_EQ(e[0], std::conj(e[1]));
  EXPECT_NEAR(e[0].real(), -0.5, 1e-15);
  const Polynomial p = characteristic_polynomial(A);
  EXPECT_NEAR(p[0], 1.0, 1e-14);
  EXPECT_NEAR(p[1], 1.0, 1e-14);
  EXPECT_NEAR(p[2], 1.0, 1e-14);
}

TEST(Eigen, RandomFosterDimensionsCover) {
  std::mt19937_64 rng(9);
  std::vector<int> seen(9, 0);
  for (int i = 0; i < 400; ++i) ++seen[static_cast<std::size_t>(random_foster(rng, 8).state_dim())];
  for (int d = 1; d <= 8; ++d) EXPECT_GT(seen[static_cast<std::size_t>(d)], 0) << d;
}
