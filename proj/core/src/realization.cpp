#include "heatbath/realization.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include <Eigen/Eigenvalues>

#include "heatbath/error.hpp"

namespace heatbath {

void StateSpace::validate() const {
  if (A.rows() != A.cols()) throw LengthMismatchError("state matrix is not square");
  if (b.size() != A.rows()) throw LengthMismatchError("input vector does not match state dimension");
  if (c.size() != A.rows()) throw LengthMismatchError("output row does not match state dimension");
}

void FosterSpec::validate() const {
  if (!std::isfinite(k0) || k0 < 0.0) throw DomainError("Foster k0 must be finite and >= 0");
  if (!(k0 > 0.0) && tanks.empty())
    throw DegenerateInputError("Foster spec has no capacitor branch and no tanks");
  double prev = 0.0;
  for (const Tank& t : tanks) {
    if (!std::isfinite(t.k) || !(t.k > 0.0)) throw DomainError("tank residue must be > 0");
    if (!std::isfinite(t.omega) || !(t.omega > prev))
      throw DomainError("tank frequencies must be positive and strictly increasing");
    prev = t.omega;
  }
  if (state_dim() > static_cast<Eigen::Index>(kMaxDegree))
    throw DegreeLimitError("Foster spec exceeds the degree cap");
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double to_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError("invalid number '" + std::string(s) + "' in Foster spec");
  return v;
}

}  // namespace

FosterSpec random_foster(std::mt19937_64& rng, int max_state_dim) {
  if (max_state_dim < 1) throw DomainError("random Foster load needs state dimension >= 1");
  std::uniform_int_distribution<int> dim_dist(1, max_state_dim);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int dim = dim_dist(rng);
  FosterSpec spec;
  spec.k0 = dim % 2 == 1 ? 0.1 + 1.9 * unit(rng) : 0.0;
  const int n_tanks = dim / 2;
  for (;;) {
    std::vector<double> w(static_cast<std::size_t>(n_tanks));
    for (double& x : w) x = 0.3 + 3.7 * unit(rng);
    std::sort(w.begin(), w.end());
    bool spread = true;
    for (std::size_t i = 1; i < w.size(); ++i) spread = spread && w[i] > 1.05 * w[i - 1];
    if (!spread) continue;
    spec.tanks.clear();
    for (double x : w) spec.tanks.push_back({0.1 + 1.9 * unit(rng), x});
    break;
  }
  return spec;
}

FosterSpec parse_foster(std::string_view text) {
  FosterSpec spec;
  bool saw_k0 = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    const std::string_view item = trim(text.substr(start, end - start));
    start = end + 1;
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos)
      throw ParseError("Foster item '" + std::string(item) + "' lacks '='");
    const std::string_view key = trim(item.substr(0, eq));
    const std::string_view value = item.substr(eq + 1);
    if (key == "k0") {
      if (saw_k0) throw ParseError("k0 given twice");
      saw_k0 = true;
      spec.k0 = to_double(value);
    } else if (key == "tank") {
      const std::size_t comma = value.find(',');
      if (comma == std::string_view::npos) throw ParseError("tank needs '<k>,<omega>'");
      spec.tanks.push_back({to_double(value.substr(0, comma)), to_double(value.substr(comma + 1))});
    } else {
      throw ParseError("unknown Foster key '" + std::string(key) + "'");
    }
  }
  spec.validate();
  return spec;
}

std::string to_text(const FosterSpec& spec) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "k0 = %.17g", spec.k0);
  std::string out = buf;
  for (const Tank& t : spec.tanks) {
    std::snprintf(buf, sizeof buf, "; tank = %.17g,%.17g", t.k, t.omega);
    out += buf;
  }
  return out;
}

RationalFunction foster_to_rational(const FosterSpec& spec) {
  spec.validate();
  const bool cap = spec.k0 > 0.0;
  std::vector<Polynomial> quad;
  for (const Tank& t : spec.tanks) quad.push_back(Polynomial({t.omega * t.omega, 0.0, 1.0}));

  auto product_except = [&](std::size_t skip) {
    Polynomial p({1.0});
    for (std::size_t j = 0; j < quad.size(); ++j)
      if (j != skip) p = p * quad[j];
    return p;
  };
  const Polynomial all = product_except(quad.size());
  const Polynomial s({0.0, 1.0});

  Polynomial den = cap ? s * all : all;
  Polynomial num = cap ? spec.k0 * all : Polynomial();
  for (std::size_t i = 0; i < quad.size(); ++i) {
    Polynomial term = (2.0 * spec.tanks[i].k) * (s * product_except(i));
    if (cap) term = term * s;
    num += term;
  }
  return RationalFunction(num, den);
}

LosslessRealization foster_realize(const FosterSpec& spec) {
  spec.validate();
  const Eigen::Index n = spec.state_dim();
  LosslessRealization r;
  r.ss.A = Matrix::Zero(n, n);
  r.ss.b = Vector::Zero(n);
  r.ss.d = 0.0;
  Eigen::Index at = 0;
  if (spec.k0 > 0.0) {
    r.ss.b(0) = std::sqrt(spec.k0);
    at = 1;
  }
  for (const Tank& t : spec.tanks) {
    r.ss.A(at, at + 1) = t.omega;
    r.ss.A(at + 1, at) = -t.omega;
    r.ss.b(at + 1) = std::sqrt(2.0 * t.k);
    at += 2;
  }
  r.ss.c = r.ss.b.transpose();
  r.omega = Matrix::Identity(n, n);
  return r;
}

std::vector<Complex> eigenvalues(const Matrix& m) {
  if (m.rows() != m.cols()) throw LengthMismatchError("eigenvalues of a non-square matrix");
  if (m.rows() == 0) return {};
  Eigen::EigenSolver<Matrix> es(m, false);
  if (es.info() != Eigen::Success) throw DegenerateInputError("eigenvalue iteration failed");
  std::vector<Complex> out(es.eigenvalues().begin(), es.eigenvalues().end());
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return out;
}

Polynomial characteristic_polynomial(const Matrix& m) {
  const std::vector<Complex> ev = eigenvalues(m);
  return Polynomial::from_roots(ev);
}

RationalFunction transfer_function(const StateSpace& ss) {
  ss.validate();
  const Polynomial chi = characteristic_polynomial(ss.A);
  if (ss.dim() == 0) return RationalFunction::constant(ss.d);
  // det(sI - A + b c) = det(sI - A) (1 + c (sI - A)^-1 b)
  const Matrix closed = ss.A - ss.b * ss.c;
  Polynomial num = characteristic_polynomial(closed) - chi;
  const double scale = std::max(1.0, chi.max_abs_coeff());
  std::vector<double> coeffs(num.coeffs().begin(), num.coeffs().end());
  while (!coeffs.empty() && std::abs(coeffs.back()) <= 1e-12 * scale) coeffs.pop_back();
  num = Polynomial(std::move(coeffs));
  if (ss.d != 0.0) num += ss.d * chi;
  return RationalFunction(num, chi);
}

namespace {

double pencil_margin(const Matrix& A, const Eigen::MatrixXcd& extra, bool stack_rows) {
  const Eigen::Index n = A.rows();
  if (n == 0) return 1.0;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff() + extra.cwiseAbs().maxCoeff());
  double worst = std::numeric_limits<double>::infinity();
  for (const Complex& lam : eigenvalues(A)) {
    Eigen::MatrixXcd shifted = lam * Eigen::MatrixXcd::Identity(n, n) - A.cast<Complex>();
    Eigen::MatrixXcd pencil;
    if (stack_rows) {
      pencil.resize(n + extra.rows(), n);
      pencil << shifted, extra;
    } else {
      pencil.resize(n, n + extra.cols());
      pencil << shifted, extra;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pencil);
    worst = std::min(worst, svd.singularValues()(n - 1) / scale);
  }
  return worst;
}

}  // namespace

double pbh_controllability_margin(const Matrix& A, const Vector& b) {
  return pencil_margin(A, b.cast<Complex>(), false);
}

double pbh_observability_margin(const Matrix& A, const RowVector& c) {
  return pencil_margin(A, c.cast<Complex>(), true);
}

bool CertificateReport::valid(double tol) const noexcept {
  return omega_positive && lyapunov_residual <= tol && port_residual <= tol &&
         max_abs_real_eig <= tol && controllability_margin > tol && observability_margin > tol;
}

CertificateReport verify_lossless_certificate(const LosslessRealization& r) {
  r.ss.validate();
  const Matrix& A = r.ss.A;
  const Matrix& W = r.omega;
  if (W.rows() != A.rows() || W.cols() != A.cols())
    throw LengthMismatchError("energy metric does not match state dimension");
  CertificateReport rep;
  if (A.rows() == 0) return rep;
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff() * W.cwiseAbs().maxCoeff());
  rep.lyapunov_residual = (A.transpose() * W + W * A).cwiseAbs().maxCoeff() / scale;
  const double port_scale = std::max(1.0, r.ss.c.cwiseAbs().maxCoeff());
  rep.port_residual = (W * r.ss.b - r.ss.c.transpose()).cwiseAbs().maxCoeff() / port_scale;
  for (const Complex& lam : eigenvalues(A))
    rep.max_abs_real_eig = std::max(rep.max_abs_real_eig, std::abs(lam.real()));
  const Matrix sym = 0.5 * (W + W.transpose());
  Eigen::LLT<Matrix> llt(sym);
  rep.omega_positive = llt.info() == Eigen::Success && (W - W.transpose()).cwiseAbs().maxCoeff() <=
                                                           1e-12 * std::max(1.0, W.cwiseAbs().maxCoeff());
  rep.controllability_margin = pbh_controllability_margin(A, r.ss.b);
  rep.observability_margin = pbh_observability_margin(A, r.ss.c);
  return rep;
}

}  // namespace heatbath
