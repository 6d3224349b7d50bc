#include "heatbath/polynomial.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "heatbath/error.hpp"

namespace heatbath {

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  normalize();
}

Polynomial::Polynomial(std::initializer_list<double> coeffs)
    : coeffs_(coeffs) {
  normalize();
}

void Polynomial::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
  if (coeffs_.size() > kMaxDegree + 1) {
    throw DegreeLimitError("polynomial degree " +
                           std::to_string(coeffs_.size() - 1) +
                           " exceeds the cap of " + std::to_string(kMaxDegree));
  }
}

Polynomial Polynomial::constant(double c) { return Polynomial({c}); }

Polynomial Polynomial::monomial(std::size_t power, double c) {
  std::vector<double> v(power + 1, 0.0);
  v[power] = c;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots,
                                  double leading) {
  std::vector<Complex> acc{Complex(leading)};
  for (const Complex& r : roots) {
    std::vector<Complex> next(acc.size() + 1, Complex(0.0));
    for (std::size_t k = 0; k < acc.size(); ++k) {
      next[k + 1] += acc[k];
      next[k] -= r * acc[k];
    }
    acc = std::move(next);
  }
  std::vector<double> re(acc.size());
  std::transform(acc.begin(), acc.end(), re.begin(),
                 [](const Complex& c) { return c.real(); });
  return Polynomial(std::move(re));
}

std::optional<std::size_t> Polynomial::degree() const noexcept {
  if (coeffs_.empty()) return std::nullopt;
  return coeffs_.size() - 1;
}

double Polynomial::leading() const {
  if (coeffs_.empty()) throw DegenerateInputError("zero polynomial has no leading coefficient");
  return coeffs_.back();
}

double Polynomial::max_abs_coeff() const noexcept {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

double Polynomial::operator()(double s) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Complex Polynomial::operator()(Complex s) const noexcept {
  Complex acc(0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

double Polynomial::magnitude_bound(Complex s) const noexcept {
  const double r = std::abs(s);
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * r + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::reflected() const {
  std::vector<double> v(coeffs_);
  for (std::size_t k = 1; k < v.size(); k += 2) v[k] = -v[k];
  return Polynomial(std::move(v));
}

Polynomial Polynomial::even_part() const {
  std::vector<double> v(coeffs_);
  for (std::size_t k = 1; k < v.size(); k += 2) v[k] = 0.0;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::odd_part() const {
  std::vector<double> v(coeffs_);
  for (std::size_t k = 0; k < v.size(); k += 2) v[k] = 0.0;
  return Polynomial(std::move(v));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
  const double cut = rel_tol * max_abs_coeff();
  std::vector<double> v(coeffs_);
  while (!v.empty() && std::abs(v.back()) <= cut) v.pop_back();
  return Polynomial(std::move(v));
}

Polynomial Polynomial::monic() const {
  const double lc = leading();
  Polynomial out(*this);
  for (double& c : out.coeffs_) c /= lc;
  out.coeffs_.back() = 1.0;
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(*this);
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  normalize();
  return *this;
}

Polynomial& Polynomial::operator*=(double k) {
  for (double& c : coeffs_) c *= k;
  normalize();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> v(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(v));
}

PolynomialDivision divide(const Polynomial& dividend, const Polynomial& divisor) {
  if (divisor.is_zero()) throw DegenerateInputError("division by the zero polynomial");
  if (dividend.is_zero() || dividend.size() < divisor.size())
    return {Polynomial{}, dividend};
  std::vector<double> rem(dividend.coeffs().begin(), dividend.coeffs().end());
  const std::size_t dq = dividend.size() - divisor.size();
  std::vector<double> quo(dq + 1, 0.0);
  const double lc = divisor.leading();
  for (std::size_t i = dq + 1; i-- > 0;) {
    const double q = rem[i + divisor.size() - 1] / lc;
    quo[i] = q;
    for (std::size_t j = 0; j < divisor.size(); ++j) rem[i + j] -= q * divisor[j];
    rem[i + divisor.size() - 1] = 0.0;
  }
  rem.resize(divisor.size() - 1);
  return {Polynomial(std::move(quo)), Polynomial(std::move(rem))};
}

Polynomial deflate(const Polynomial& p, const Polynomial& factor) {
  if (factor.is_zero()) throw DegenerateInputError("deflation by the zero polynomial");
  if (p.is_zero()) return {};
  if (p.size() < factor.size())
    throw DegenerateInputError("deflation factor has higher degree than the polynomial");
  const auto rows = static_cast<Eigen::Index>(p.size());
  const auto cols = static_cast<Eigen::Index>(p.size() - factor.size() + 1);
  Eigen::MatrixXd conv = Eigen::MatrixXd::Zero(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < factor.size(); ++i)
      conv(j + static_cast<Eigen::Index>(i), j) = factor[i];
  Eigen::VectorXd rhs(rows);
  for (Eigen::Index i = 0; i < rows; ++i) rhs(i) = p[static_cast<std::size_t>(i)];
  const Eigen::VectorXd q = conv.colPivHouseholderQr().solve(rhs);
  return Polynomial(std::vector<double>(q.data(), q.data() + q.size()));
}

namespace {

Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex r) {
  for (int it = 0; it < 3; ++it) {
    const Complex f = p(r);
    const Complex df = dp(r);
    if (std::abs(df) == 0.0) break;
    const Complex next = r - f / df;
    if (!(std::abs(p(next)) < std::abs(f))) break;
    r = next;
  }
  return r;
}

bool lex_less(const Complex& a, const Complex& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

}  // namespace

std::vector<Root> roots(const Polynomial& p, const RootOptions& options) {
  if (p.is_zero()) throw DegenerateInputError("roots of the zero polynomial are undefined");
  const std::size_t n = *p.degree();
  if (n == 0) return {};

  // Zeros at the origin are split off exactly; the companion solver only
  // sees the remaining factor.
  std::size_t zeros_at_origin = 0;
  while (p[zeros_at_origin] == 0.0) ++zeros_at_origin;
  std::vector<double> rest(p.coeffs().begin() + static_cast<std::ptrdiff_t>(zeros_at_origin),
                           p.coeffs().end());
  const Polynomial q(rest);

  std::vector<Complex> raw(zeros_at_origin, Complex(0.0));
  if (*q.degree() >= 1) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(q.size()));
    for (std::size_t k = 0; k < q.size(); ++k) c(static_cast<Eigen::Index>(k)) = q[k];
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(c);
    const auto& rs = solver.roots();
    const Polynomial dq = q.derivative();

    // Real-Schur output is conjugate closed; polish the upper half-plane
    // member of each pair and mirror it.
    for (Eigen::Index i = 0; i < rs.size(); ++i) {
      const Complex r = rs(i);
      if (r.imag() == 0.0) {
        const Complex polished = newton_polish(q, dq, r);
        raw.emplace_back(polished.real(), 0.0);
      } else if (r.imag() > 0.0) {
        const Complex polished = newton_polish(q, dq, r);
        if (polished.imag() > 0.0) {
          raw.push_back(polished);
          raw.push_back(std::conj(polished));
        } else {
          raw.push_back(r);
          raw.push_back(std::conj(r));
        }
      }
    }
  }

  // Cluster near-coincident roots into multiplicities.
  std::sort(raw.begin(), raw.end(), lex_less);
  std::vector<int> cluster(raw.size());
  std::iota(cluster.begin(), cluster.end(), 0);
  auto find = [&](int i) {
    while (cluster[i] != i) i = cluster[i] = cluster[cluster[i]];
    return i;
  };
  for (std::size_t i = 0; i < raw.size(); ++i)
    for (std::size_t j = i + 1; j < raw.size(); ++j)
      if (std::abs(raw[i] - raw[j]) <=
          options.cluster_tol * (1.0 + std::max(std::abs(raw[i]), std::abs(raw[j]))))
        cluster[find(static_cast<int>(j))] = find(static_cast<int>(i));

  std::vector<Root> out;
  std::vector<int> seen(raw.size(), -1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const int c = find(static_cast<int>(i));
    if (seen[c] < 0) {
      seen[c] = static_cast<int>(out.size());
      out.push_back({raw[i], 1});
    } else {
      Root& r = out[seen[c]];
      r.value += raw[i];
      ++r.multiplicity;
    }
  }
  for (Root& r : out) {
    r.value /= static_cast<double>(r.multiplicity);
    // Centroids of conjugate-closed clusters on the real axis are real.
    if (std::abs(r.value.imag()) <= options.cluster_tol * (1.0 + std::abs(r.value)) &&
        r.multiplicity > 1)
      r.value = Complex(r.value.real(), 0.0);
  }
  std::sort(out.begin(), out.end(),
            [](const Root& a, const Root& b) { return lex_less(a.value, b.value); });
  return out;
}

std::vector<Complex> root_values(const Polynomial& p, const RootOptions& options) {
  std::vector<Complex> out;
  for (const Root& r : roots(p, options))
    out.insert(out.end(), static_cast<std::size_t>(r.multiplicity), r.value);
  return out;
}

}  // namespace heatbath
