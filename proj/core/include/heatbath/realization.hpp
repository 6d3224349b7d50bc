#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "heatbath/rational.hpp"

namespace heatbath {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// x' = A x + b u, y = c x + d u.
struct StateSpace {
  Matrix A;
  Vector b;
  RowVector c;
  double d = 0.0;

  Eigen::Index dim() const noexcept { return A.rows(); }
  /// Throws LengthMismatchError when the blocks do not fit together.
  void validate() const;
};

/// Lossless load (A, b0, c0) with its energy metric Omega.
struct LosslessRealization {
  StateSpace ss;
  Matrix omega;
};

struct Tank {
  double k = 0.0;
  double omega = 0.0;
};

/// Z(s) = k0/s + sum_i 2 k_i s / (s^2 + omega_i^2).
struct FosterSpec {
  double k0 = 0.0;
  std::vector<Tank> tanks;

  Eigen::Index state_dim() const noexcept {
    return (k0 > 0.0 ? 1 : 0) + 2 * static_cast<Eigen::Index>(tanks.size());
  }
  /// Empty spec -> DegenerateInputError; other violations -> DomainError.
  void validate() const;
};

/// Random valid spec with state dimension in [1, max_state_dim]. Frequencies
/// lie in [0.3, 4] with relative gaps of at least 5%; residues in [0.1, 2].
FosterSpec random_foster(std::mt19937_64& rng, int max_state_dim);

/// Parses `k0 = <v>; tank = <k>,<omega>; tank = ...`.
FosterSpec parse_foster(std::string_view text);
std::string to_text(const FosterSpec& spec);

RationalFunction foster_to_rational(const FosterSpec& spec);

/// Canonical Foster coordinates: capacitor state first, then one
/// [[0, w], [-w, 0]] block per tank in increasing w, with Omega = I.
LosslessRealization foster_realize(const FosterSpec& spec);

struct CertificateReport {
  double lyapunov_residual = 0.0;  // max |A^T Omega + Omega A|, scaled
  double port_residual = 0.0;      // max |Omega b - c^T|, scaled
  double max_abs_real_eig = 0.0;   // max |Re lambda(A)|
  double controllability_margin = 0.0;
  double observability_margin = 0.0;
  bool omega_positive = false;

  bool valid(double tol = 1e-8) const noexcept;
};

CertificateReport verify_lossless_certificate(const LosslessRealization& r);

/// Eigenvalues of a real square matrix; complex ones in exact conjugate pairs.
std::vector<Complex> eigenvalues(const Matrix& m);

/// det(sI - m) built from the eigenvalues of m.
Polynomial characteristic_polynomial(const Matrix& m);

/// c (sI - A)^-1 b + d in reduced form.
RationalFunction transfer_function(const StateSpace& ss);

/// Smallest singular value of [lambda I - A, b] over the eigenvalues of A,
/// relative to the scale of the pencil. Zero for an uncontrollable mode.
double pbh_controllability_margin(const Matrix& A, const Vector& b);
double pbh_observability_margin(const Matrix& A, const RowVector& c);

}  // namespace heatbath
