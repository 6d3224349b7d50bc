#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <vector>

namespace heatbath {

using Complex = std::complex<double>;

/// Highest degree accepted anywhere in the library. Power-basis arithmetic
/// beyond this is too poorly conditioned for the tolerances used here.
inline constexpr std::size_t kMaxDegree = 32;

/// Real polynomial with coefficients stored lowest degree first.
///
/// Trailing (leading-degree) exact zeros are stripped on construction, so a
/// nonzero polynomial always has a nonzero leading coefficient. The zero
/// polynomial has no coefficients and no degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs);
  Polynomial(std::initializer_list<double> coeffs);

  static Polynomial constant(double c);
  static Polynomial monomial(std::size_t power, double c = 1.0);
  /// Real polynomial `leading * prod (s - r)`. The root list must be closed
  /// under conjugation; residual imaginary parts are discarded.
  static Polynomial from_roots(std::span<const Complex> roots,
                               double leading = 1.0);

  bool is_zero() const noexcept { return coeffs_.empty(); }
  /// Degree, or nullopt for the zero polynomial.
  std::optional<std::size_t> degree() const noexcept;
  std::size_t size() const noexcept { return coeffs_.size(); }
  std::span<const double> coeffs() const noexcept { return coeffs_; }
  double operator[](std::size_t k) const noexcept {
    return k < coeffs_.size() ? coeffs_[k] : 0.0;
  }
  double leading() const;
  double max_abs_coeff() const noexcept;

  double operator()(double s) const noexcept;
  Complex operator()(Complex s) const noexcept;
  /// Sum of |c_k| |s|^k, the natural scale for rounding error in p(s).
  double magnitude_bound(Complex s) const noexcept;

  Polynomial derivative() const;
  /// p(-s).
  Polynomial reflected() const;
  Polynomial even_part() const;
  Polynomial odd_part() const;
  /// Drops leading coefficients with |c| <= rel_tol * max|c|.
  Polynomial trimmed(double rel_tol) const;
  /// Same polynomial divided by its leading coefficient.
  Polynomial monic() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(double k);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, double k) { return a *= k; }
  friend Polynomial operator*(double k, Polynomial a) { return a *= k; }
  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void normalize();
  std::vector<double> coeffs_;
};

struct PolynomialDivision {
  Polynomial quotient;
  Polynomial remainder;
};

/// Euclidean long division.
PolynomialDivision divide(const Polynomial& dividend, const Polynomial& divisor);

/// Quotient of `p` by a known factor, computed as the least-squares solution
/// of factor * q = p. Used to deflate common roots out of floating data.
Polynomial deflate(const Polynomial& p, const Polynomial& factor);

/// A root together with its multiplicity.
struct Root {
  Complex value;
  int multiplicity = 1;
};

struct RootOptions {
  /// Roots closer than cluster_tol * (1 + |r|) are merged into one root of
  /// higher multiplicity.
  double cluster_tol = 1e-5;
};

/// Roots of a nonzero polynomial via the balanced companion matrix, polished
/// by Newton steps. Complex roots come out in exactly conjugate pairs. The
/// result is sorted by real part, then imaginary part.
std::vector<Root> roots(const Polynomial& p, const RootOptions& options = {});

/// Roots expanded by multiplicity.
std::vector<Complex> root_values(const Polynomial& p,
                                 const RootOptions& options = {});

}  // namespace heatbath
