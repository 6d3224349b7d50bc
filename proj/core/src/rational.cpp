#include "heatbath/rational.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <utility>

#include "heatbath/error.hpp"

namespace heatbath {

namespace {

bool same_point(Complex a, Complex b) {
  return std::abs(a - b) <= kCancelTol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

/// Removes the roots shared by p and q from both.
std::pair<Polynomial, Polynomial> cancel_common(const Polynomial& p, const Polynomial& q) {
  if (p.is_zero() || q.is_zero() || *p.degree() == 0 || *q.degree() == 0) return {p, q};
  std::vector<Root> rp = roots(p);
  std::vector<Root> rq = roots(q);
  std::vector<Complex> common;
  for (Root& a : rp) {
    for (Root& b : rq) {
      if (a.multiplicity == 0 || b.multiplicity == 0) continue;
      if (!same_point(a.value, b.value)) continue;
      const int k = std::min(a.multiplicity, b.multiplicity);
      // Conjugate-closed by construction: the mirror pair matches the same way.
      const Complex mid = 0.5 * (a.value + b.value);
      const Complex v = (a.value.imag() == 0.0 && b.value.imag() == 0.0)
                            ? Complex(mid.real(), 0.0)
                            : mid;
      common.insert(common.end(), static_cast<std::size_t>(k), v);
      a.multiplicity -= k;
      b.multiplicity -= k;
    }
  }
  if (common.empty()) return {p, q};
  // Symmetrize the list so from_roots yields a real factor.
  std::vector<Complex> sym;
  for (const Complex& c : common) {
    if (c.imag() > 0.0) {
      sym.push_back(c);
      sym.push_back(std::conj(c));
    } else if (c.imag() == 0.0) {
      sym.push_back(c);
    }
  }
  if (sym.size() != common.size()) sym = common;
  const Polynomial g = Polynomial::from_roots(sym);
  return {deflate(p, g), deflate(q, g)};
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
  return buf;
}

std::string format_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string pretty_poly(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double c = p[k];
    if (c == 0.0) continue;
    const double mag = std::abs(c);
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    first = false;
    const bool unit = std::abs(mag - 1.0) <= 1e-12;
    if (k == 0 || !unit) out += format_short(mag);
    if (k >= 1) {
      out += "s";
      if (k >= 2) out += "^" + std::to_string(k);
    }
  }
  return out;
}

std::vector<double> parse_numbers(std::string_view text) {
  std::vector<double> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (std::isspace(static_cast<unsigned char>(text[i])) || text[i] == ','))
      ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != ',')
      ++j;
    const std::string_view token = text.substr(i, j - i);
    double v = 0.0;
    const char* first = token.data();
    if (!token.empty() && token.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size())
      throw ParseError("invalid number '" + std::string(token) + "'");
    out.push_back(v);
    i = j;
  }
  return out;
}

}  // namespace

RationalFunction::RationalFunction() : num_(), den_({1.0}) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  reduce();
}

RationalFunction::RationalFunction(Polynomial num, Polynomial den, Unreduced)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw DegenerateInputError("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial({1.0});
    return;
  }
  const double lc = den_.leading();
  num_ = num_ * (1.0 / lc);
  den_ = den_.monic();
}

void RationalFunction::reduce() {
  if (den_.is_zero()) throw DegenerateInputError("rational function with zero denominator");
  if (num_.is_zero()) {
    den_ = Polynomial({1.0});
    return;
  }
  auto [n, d] = cancel_common(num_, den_);
  const double lc = d.leading();
  num_ = n * (1.0 / lc);
  den_ = d.monic();
}

RationalFunction RationalFunction::constant(double c) {
  return RationalFunction(Polynomial({c}), Polynomial({1.0}), Unreduced{});
}

RationalFunction RationalFunction::s() {
  return RationalFunction(Polynomial({0.0, 1.0}), Polynomial({1.0}), Unreduced{});
}

bool RationalFunction::is_proper() const noexcept {
  return num_.is_zero() || *num_.degree() <= *den_.degree();
}

bool RationalFunction::is_strictly_proper() const noexcept {
  return num_.is_zero() || *num_.degree() < *den_.degree();
}

double RationalFunction::value_at_infinity() const {
  if (!is_proper()) throw ImproperResultError("improper rational function is unbounded at infinity");
  if (is_strictly_proper()) return 0.0;
  return num_.leading() / den_.leading();
}

RationalFunction RationalFunction::reflected() const {
  return RationalFunction(num_.reflected(), den_.reflected(), Unreduced{});
}

RationalFunction RationalFunction::inverse() const {
  if (is_zero()) throw DegenerateInputError("inverse of the zero rational function");
  return RationalFunction(den_, num_, Unreduced{});
}

RationalFunction RationalFunction::operator-() const {
  return RationalFunction(-num_, den_, Unreduced{});
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  // Both operands are reduced, so only cross factors can cancel.
  auto [an, bd] = cancel_common(a.num_, b.den_);
  auto [bn, ad] = cancel_common(b.num_, a.den_);
  return RationalFunction(an * bn, ad * bd, RationalFunction::Unreduced{});
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  return a * b.inverse();
}

Complex evaluate(const RationalFunction& r, Complex s) {
  const Complex d = r.den()(s);
  if (std::abs(d) <= 1e-13 * r.den().magnitude_bound(s)) {
    std::ostringstream msg;
    msg << "evaluation at a pole s = " << s;
    throw PoleEvaluationError(msg.str(), s);
  }
  return r.num()(s) / d;
}

namespace {

bool has_parity(const Polynomial& p, bool even, double tol) {
  const Polynomial wrong = even ? p.odd_part() : p.even_part();
  return wrong.max_abs_coeff() <= tol * p.max_abs_coeff();
}

struct AxisRoots {
  bool ok = true;
  std::vector<double> frequencies;  // imaginary parts >= 0
};

AxisRoots axis_roots(const Polynomial& p, double tol) {
  AxisRoots out;
  if (*p.degree() == 0) return out;
  for (const Root& r : roots(p)) {
    if (r.multiplicity != 1) {
      out.ok = false;
      return out;
    }
    if (std::abs(r.value.real()) > tol * (1.0 + std::abs(r.value))) {
      out.ok = false;
      return out;
    }
    if (r.value.imag() >= -tol * (1.0 + std::abs(r.value)))
      out.frequencies.push_back(std::max(0.0, r.value.imag()));
  }
  return out;
}

}  // namespace

bool is_lossless_pr(const RationalFunction& z, double tol) {
  if (z.is_zero()) return false;
  const Polynomial& n = z.num();
  const Polynomial& d = z.den();
  const std::size_t dn = *n.degree();
  const std::size_t dd = *d.degree();
  if (dn + 1 != dd && dd + 1 != dn) return false;
  const bool num_even = dn % 2 == 0;
  if (!has_parity(n, num_even, tol) || !has_parity(d, !num_even, tol)) return false;
  if (n.leading() / d.leading() <= 0.0) return false;

  const AxisRoots zeros = axis_roots(n, tol);
  const AxisRoots poles = axis_roots(d, tol);
  if (!zeros.ok || !poles.ok) return false;

  // Foster reactance theorem: along the positive imaginary axis, poles and
  // zeros alternate.
  std::vector<std::pair<double, int>> marks;
  for (double w : zeros.frequencies) marks.emplace_back(w, 0);
  for (double w : poles.frequencies) marks.emplace_back(w, 1);
  std::sort(marks.begin(), marks.end());
  for (std::size_t i = 1; i < marks.size(); ++i) {
    if (marks[i].second == marks[i - 1].second) return false;
    if (marks[i].first - marks[i - 1].first <= tol * (1.0 + marks[i].first)) return false;
  }
  return true;
}

double allpass_identity_residual(const RationalFunction& k) {
  const Polynomial lhs = k.num() * k.num().reflected();
  const Polynomial rhs = k.den() * k.den().reflected();
  const Polynomial diff = lhs - rhs;
  return diff.max_abs_coeff() / std::max(rhs.max_abs_coeff(), lhs.max_abs_coeff());
}

bool is_inner(const RationalFunction& k, double tol) {
  if (k.is_zero()) return false;
  if (*k.den().degree() > 0) {
    for (const Root& p : roots(k.den()))
      if (!(p.value.real() < -tol * (1.0 + std::abs(p.value)))) return false;
  }
  return allpass_identity_residual(k) <= tol;
}

SpectralFactors spectral_factor(const RationalFunction& phi, double tol) {
  if (phi.is_zero()) throw NotSpectralDensityError("spectral density is identically zero");
  const Polynomial& n = phi.num();
  const Polynomial& d = phi.den();
  if (!has_parity(n, true, tol) || !has_parity(d, true, tol))
    throw NotSpectralDensityError("spectral density is not even in s");
  const Polynomial ne = n.even_part();
  const Polynomial de = d.even_part();

  auto left_half = [&](const Polynomial& p, const char* what) {
    std::vector<Complex> lhp;
    if (*p.degree() == 0) return lhp;
    for (const Root& r : roots(p)) {
      if (std::abs(r.value.real()) <= kAxisSnapTol * (1.0 + std::abs(r.value)))
        throw NotSpectralDensityError(std::string("spectral density has an imaginary-axis ") +
                                      what);
      if (r.value.real() < 0.0)
        lhp.insert(lhp.end(), static_cast<std::size_t>(r.multiplicity), r.value);
    }
    if (2 * lhp.size() != *p.degree())
      throw NotSpectralDensityError(std::string("unpaired ") + what +
                                    "s: density is not a product F(s)F(-s)");
    return lhp;
  };
  const std::vector<Complex> zl = left_half(ne, "zero");
  const std::vector<Complex> pl = left_half(de, "pole");

  const double phi0 = ne(0.0) / de(0.0);
  if (!(phi0 > 0.0))
    throw NotSpectralDensityError("spectral density is not positive on the imaginary axis");

  const Polynomial nl = Polynomial::from_roots(zl);
  const Polynomial dl = Polynomial::from_roots(pl);
  const double g = std::sqrt(phi0) * std::abs(dl(0.0) / nl(0.0));

  SpectralFactors out{RationalFunction(nl * g, dl), RationalFunction{}};
  if (pl.empty()) {
    out.Wbar = out.W;
  } else {
    std::vector<Complex> pr(pl.size());
    std::transform(pl.begin(), pl.end(), pr.begin(), [](Complex c) { return -c; });
    out.Wbar = RationalFunction(nl * (-g), Polynomial::from_roots(pr));
  }
  return out;
}

double coefficient_distance(const RationalFunction& a, const RationalFunction& b) {
  if (a.num().size() != b.num().size() || a.den().size() != b.den().size())
    return std::numeric_limits<double>::infinity();
  double scale = 1.0;
  scale = std::max({scale, a.num().max_abs_coeff(), a.den().max_abs_coeff()});
  double diff = 0.0;
  for (std::size_t k = 0; k < a.num().size(); ++k)
    diff = std::max(diff, std::abs(a.num()[k] - b.num()[k]));
  for (std::size_t k = 0; k < a.den().size(); ++k)
    diff = std::max(diff, std::abs(a.den()[k] - b.den()[k]));
  return diff / scale;
}

std::string to_text(const RationalFunction& r) {
  std::string out;
  auto emit = [&](const Polynomial& p) {
    if (p.is_zero()) {
      out += "0";
      return;
    }
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (k) out += ' ';
      out += format_number(p[k]);
    }
  };
  emit(r.num());
  out += " ; ";
  emit(r.den());
  return out;
}

RationalFunction parse_rational(std::string_view text) {
  const auto semi = text.find(';');
  if (semi == std::string_view::npos)
    throw ParseError("rational function must have the form 'num ; den'");
  if (text.find(';', semi + 1) != std::string_view::npos)
    throw ParseError("rational function has more than one ';'");
  const std::vector<double> n = parse_numbers(text.substr(0, semi));
  const std::vector<double> d = parse_numbers(text.substr(semi + 1));
  if (n.empty() || d.empty()) throw ParseError("numerator and denominator need coefficients");
  return RationalFunction(Polynomial(n), Polynomial(d));
}

std::string to_pretty(const RationalFunction& r) {
  const std::string n = pretty_poly(r.num());
  if (*r.den().degree() == 0 && r.den()[0] == 1.0) return n;
  const std::string d = pretty_poly(r.den());
  auto wrap = [](const std::string& t) {
    return t == "s" || t.find_first_of(" s") == std::string::npos ? t : "(" + t + ")";
  };
  return wrap(n) + "/" + wrap(d);
}

}  // namespace heatbath
