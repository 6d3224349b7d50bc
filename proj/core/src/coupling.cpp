#include "heatbath/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heatbath/error.hpp"

namespace heatbath {

Observable Observable::make(const RowVector& c, double d, const RowVector& c0) {
  if (c.size() != c0.size()) throw LengthMismatchError("observable row does not match the load");
  Observable o;
  o.c = c;
  o.d = d;
  o.h = c - d * c0;
  o.h_bar = c + d * c0;
  return o;
}

RationalFunction scattering_formula(const RationalFunction& Z0) {
  return RationalFunction(Z0.num() - Z0.den(), Z0.num() + Z0.den());
}

RationalFunction scattering_K(const RationalFunction& Z0) {
  if (!is_lossless_pr(Z0)) throw NotLosslessError("impedance is not lossless positive-real");
  if (!Z0.is_strictly_proper())
    throw ImproperResultError("impedance has a pole at infinity (series inductor at the port)");
  RationalFunction K = scattering_formula(Z0);
  if (!is_inner(K)) throw NotInnerError("scattering function failed the inner test");
  return K;
}

CoupledModelPair close_loops(const LosslessRealization& load) {
  const CertificateReport cert = verify_lossless_certificate(load);
  if (!cert.valid()) throw InvalidLoadError("load fails the lossless energy certificate");
  if (load.ss.d != 0.0) throw InvalidLoadError("lossless load cannot have a feedthrough term");
  CoupledModelPair pair;
  const Matrix bc = load.ss.b * load.ss.c;
  pair.gamma = load.ss.A - bc;
  pair.gamma_bar = load.ss.A + bc;
  pair.input_gain = 2.0 * load.ss.b;
  pair.b0 = load.ss.b;
  pair.c0 = load.ss.c;
  pair.K = scattering_K(transfer_function(load.ss));
  pair.k_crosscheck = coefficient_distance(pair.K, scattering_K_statespace(pair));
  return pair;
}

RationalFunction scattering_K_statespace(const CoupledModelPair& pair) {
  const RationalFunction fwd = transfer_function({pair.gamma, pair.b0, pair.c0, 0.0});
  const RationalFunction bwd = transfer_function({pair.gamma_bar, pair.b0, pair.c0, 0.0});
  return -(fwd / bwd);
}

ObservableTransfers observable_transfers(const CoupledModelPair& pair, const Observable& obs) {
  const Eigen::Index n = pair.gamma.rows();
  if (obs.h.size() != n || obs.h_bar.size() != n)
    throw LengthMismatchError("observable does not match the coupled pair");
  ObservableTransfers out{
      transfer_function({pair.gamma, pair.input_gain, obs.h, 2.0 * obs.d}),
      -transfer_function({pair.gamma_bar, pair.input_gain, obs.h_bar, 2.0 * obs.d})};
  if (out.W.is_zero() || out.Wbar.is_zero())
    throw DegenerateInputError("observable sees neither the load state nor the port current");
  return out;
}

RationalFunction observable_spectrum(const CoupledModelPair& pair, const Observable& obs) {
  const RationalFunction W = observable_transfers(pair, obs).W;
  return W * W.reflected();
}

Inversion invert_K_to_Z(const RationalFunction& K) {
  if (!is_inner(K)) throw NotInnerError("scattering function is not inner");
  const double k_inf = K.value_at_infinity();
  if (std::abs(k_inf + 1.0) > 1e-8)
    throw ImproperResultError("K(inf) != -1: the impedance would need a feedthrough term");
  const Polynomial& n = K.num();
  const Polynomial& d = K.den();
  if ((n + d).max_abs_coeff() <= 1e-12 * d.max_abs_coeff()) return {RationalFunction(), true};
  // K(inf) = -1 makes the top coefficient of d + n cancel.
  const Polynomial top = (d + n).trimmed(1e-9);
  const Polynomial bottom = d - n;
  const RationalFunction z(top, bottom);
  if (!is_lossless_pr(z)) throw NotLosslessError("inverted impedance is not lossless positive-real");
  // Drop the rounding noise in the wrong-parity coefficients.
  const bool num_even = *z.num().degree() % 2 == 0;
  return {RationalFunction(num_even ? z.num().even_part() : z.num().odd_part(),
                           num_even ? z.den().odd_part() : z.den().even_part()),
          false};
}

FosterSpec foster_decompose(const RationalFunction& Z) {
  if (!is_lossless_pr(Z)) throw NotLosslessError("impedance is not lossless positive-real");
  if (!Z.is_strictly_proper()) throw ImproperResultError("impedance is not strictly proper");
  const Polynomial& N = Z.num();
  const Polynomial& D = Z.den();
  const Polynomial dD = D.derivative();
  FosterSpec spec;
  for (const Root& r : roots(D)) {
    const double mag = std::abs(r.value);
    if (mag <= kAxisSnapTol) {
      spec.k0 = N(0.0) / dD(0.0);
      if (!(spec.k0 > 0.0))
        throw NegativeResidueError("nonpositive residue at s = 0: k0 = " + std::to_string(spec.k0));
    } else if (r.value.imag() > 0.0) {
      const Complex s(0.0, r.value.imag());
      const double k = (N(s) / dD(s)).real();
      if (!(k > 0.0))
        throw NegativeResidueError("nonpositive residue at omega = " +
                                   std::to_string(r.value.imag()) + ": k = " + std::to_string(k));
      spec.tanks.push_back({k, r.value.imag()});
    }
  }
  std::sort(spec.tanks.begin(), spec.tanks.end(),
            [](const Tank& a, const Tank& b) { return a.omega < b.omega; });
  spec.validate();
  return spec;
}

double allpass_grid_residual(const RationalFunction& K, int points) {
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const double w = std::pow(10.0, -3.0 + 6.0 * k / std::max(1, points - 1));
    worst = std::max(worst, std::abs(std::abs(evaluate(K, Complex(0.0, w))) - 1.0));
  }
  return worst;
}

double mirror_residual(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const Complex& x : a) {
    std::size_t best = b.size();
    double dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dj = std::abs(x + b[j]);
      if (dj < dist) {
        dist = dj;
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, dist);
  }
  return worst;
}

namespace {

Observable fit_observable(const CoupledModelPair& pair, const RationalFunction& W) {
  const Eigen::Index m = pair.gamma.rows();
  // W = 2[h (sI - Gamma)^-1 b0 + d] with monic char. polynomial.
  const std::size_t top = static_cast<std::size_t>(m);
  const double d = W.num().size() > top ? 0.5 * W.num()[top] / W.den().leading() : 0.0;

  double radius = 0.0;
  for (const Complex& lam : eigenvalues(pair.gamma)) radius = std::max(radius, std::abs(lam));
  radius = std::max(radius, 1e-3);
  const int points = static_cast<int>(4 * m);
  Eigen::MatrixXd lhs(2 * points, m);
  Eigen::VectorXd rhs(2 * points);
  const Eigen::MatrixXcd gamma = pair.gamma.cast<Complex>();
  const Eigen::VectorXcd b0 = pair.b0.cast<Complex>();
  for (int k = 0; k < points; ++k) {
    const double w = radius * std::pow(10.0, -1.0 + 2.0 * k / std::max(1, points - 1));
    const Complex s(0.0, w);
    const Eigen::VectorXcd r =
        (s * Eigen::MatrixXcd::Identity(m, m) - gamma).partialPivLu().solve(b0);
    const Complex target = evaluate(W, s) - 2.0 * d;
    lhs.row(2 * k) = 2.0 * r.real().transpose();
    lhs.row(2 * k + 1) = 2.0 * r.imag().transpose();
    rhs(2 * k) = target.real();
    rhs(2 * k + 1) = target.imag();
  }
  const Vector h = lhs.colPivHouseholderQr().solve(rhs);
  return Observable::make(h.transpose() + d * pair.c0, d, pair.c0);
}

double spectrum_error(const RationalFunction& phi, const RationalFunction& W, double radius) {
  double worst = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double w = k == 0 ? 0.0 : radius * std::pow(10.0, -2.0 + 4.0 * (k - 1) / 199.0);
    const Complex s(0.0, w);
    const double target = evaluate(phi, s).real();
    const double got = std::norm(evaluate(W, s));
    worst = std::max(worst, std::abs(got - target) / std::abs(target));
  }
  return worst;
}

}  // namespace

BathSynthesis spectrum_to_bath(const RationalFunction& phi) {
  BathSynthesis out;
  out.factors = with_stage("spectral_factor", [&] { return spectral_factor(phi); });
  out.K = with_stage("scattering", [&] { return out.factors.Wbar.inverse() * out.factors.W; });
  out.Z0 = with_stage("invert_K_to_Z", [&] {
    const Inversion inv = invert_K_to_Z(out.K);
    if (inv.short_circuit) throw DegenerateInputError("K = -1 describes a short circuit");
    return inv.impedance;
  });
  out.foster = with_stage("foster_decompose", [&] { return foster_decompose(out.Z0); });
  out.load = with_stage("foster_realize", [&] { return foster_realize(out.foster); });
  out.pair = with_stage("close_loops", [&] { return close_loops(out.load); });
  with_stage("observable", [&] {
    out.observable = fit_observable(out.pair, out.factors.W);
    const RationalFunction W = observable_transfers(out.pair, out.observable).W;
    double radius = 1.0;
    for (const Complex& lam : eigenvalues(out.pair.gamma)) radius = std::max(radius, std::abs(lam));
    out.spectrum_residual = spectrum_error(phi, W, radius);
    if (!(out.spectrum_residual <= 1e-6))
      throw DegenerateInputError("realized observable spectrum misses the density by " +
                                 std::to_string(out.spectrum_residual));
  });
  return out;
}

}  // namespace heatbath
