#pragma once

#include <string>
#include <string_view>

#include "heatbath/polynomial.hpp"

namespace heatbath {

/// Relative distance below which a numerator root and a denominator root are
/// treated as the same point and cancelled.
inline constexpr double kCancelTol = 1e-7;

/// Roots with |Re| below this fraction of (1 + |r|) are moved onto the
/// imaginary axis before any lossless classification.
inline constexpr double kAxisSnapTol = 1e-8;

/// Real rational function num(s)/den(s) in reduced form.
///
/// Construction cancels numerator/denominator roots that coincide within
/// kCancelTol (relative) and scales so the denominator is monic. The zero
/// function is stored as 0/1.
class RationalFunction {
 public:
  RationalFunction();
  RationalFunction(Polynomial num, Polynomial den);

  static RationalFunction constant(double c);
  /// The identity s/1.
  static RationalFunction s();

  const Polynomial& num() const noexcept { return num_; }
  const Polynomial& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_.is_zero(); }
  bool is_proper() const noexcept;
  bool is_strictly_proper() const noexcept;
  /// Limit as s -> infinity; throws ImproperResultError for improper R.
  double value_at_infinity() const;

  /// R(-s).
  RationalFunction reflected() const;
  /// 1/R; throws DegenerateInputError for the zero function.
  RationalFunction inverse() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);

 private:
  struct Unreduced {};
  RationalFunction(Polynomial num, Polynomial den, Unreduced);
  void reduce();

  Polynomial num_;
  Polynomial den_;
};

/// num(s)/den(s); throws PoleEvaluationError when s is a pole.
Complex evaluate(const RationalFunction& r, Complex s);

/// Lossless positive-real test: Z odd, poles and zeros simple, on the
/// imaginary axis and interlacing, positive leading ratio.
bool is_lossless_pr(const RationalFunction& z, double tol = kAxisSnapTol);

/// Stable with K(s)K(-s) = 1 as a rational identity.
bool is_inner(const RationalFunction& k, double tol = 1e-8);

/// Analytic/coanalytic spectral factors of an even, nonnegative density.
///
/// W carries the left half-plane poles and zeros of Phi. Wbar keeps the zeros
/// of W and mirrors its poles into the right half-plane, with the sign chosen
/// so that Wbar^-1 W is inner with value -1 at infinity (for constant Phi,
/// Wbar = W). Both satisfy F(s)F(-s) = Phi(s).
struct SpectralFactors {
  RationalFunction W;
  RationalFunction Wbar;
};
SpectralFactors spectral_factor(const RationalFunction& phi, double tol = 1e-8);

/// Largest coefficient difference between two reduced, denominator-monic
/// functions, relative to max(1, largest coefficient). Infinite when the
/// degrees differ.
double coefficient_distance(const RationalFunction& a, const RationalFunction& b);

/// Residual of K(s)K(-s) - 1, relative to the size of the denominator product.
double allpass_identity_residual(const RationalFunction& k);

/// Plain-text form `n0 n1 ... ; d0 d1 ...`, lowest degree first.
std::string to_text(const RationalFunction& r);
RationalFunction parse_rational(std::string_view text);
/// Human-readable form such as (1 - s)/(1 + s).
std::string to_pretty(const RationalFunction& r);

}  // namespace heatbath
