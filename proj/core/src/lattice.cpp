#include "heatbath/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>
#include <unsupported/Eigen/FFT>

#include "heatbath/error.hpp"

namespace heatbath {

std::size_t ChainConfig::steps() const { return static_cast<std::size_t>(std::llround(t_max / dt)); }

void ChainConfig::validate() const {
  if (M < 1) throw DomainError("chain half width M must be >= 1");
  if (!(c > 0.0)) throw DomainError("chain coupling c must be > 0");
  if (!(beta >= 0.0)) throw DomainError("beta must be >= 0");
  if (!(dt > 0.0) || !(t_max >= 0.0)) throw DomainError("chain needs dt > 0 and t_max >= 0");
  // Group velocity is at most c sites per unit time; a disturbance from site
  // 0 needs M/c to reach a clamped end and as long again to come back.
  if (reflection_free && !(t_max < M / c))
    throw ReflectionWindowError("guarded chain run needs t_max < M/c");
}

Matrix Tridiagonal::to_dense() const {
  const Eigen::Index n = diag.size();
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = diag(i);
  for (Eigen::Index i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = off(i);
  return m;
}

Vector Tridiagonal::apply(const Vector& x) const {
  const Eigen::Index n = diag.size();
  if (x.size() != n) throw LengthMismatchError("tridiagonal operator size mismatch");
  Vector y = diag.cwiseProduct(x);
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    y(i) += off(i) * x(i + 1);
    y(i + 1) += off(i) * x(i);
  }
  return y;
}

Tridiagonal build_potential(int M, double c) {
  if (M < 1) throw DomainError("chain half width M must be >= 1");
  if (!(c > 0.0)) throw DomainError("chain coupling c must be > 0");
  const Eigen::Index n = 2 * M + 1;
  return {Vector::Constant(n, 2.0 * c * c), Vector::Constant(n - 1, -c * c)};
}

Tridiagonal build_potential(const ChainConfig& cfg) { return build_potential(cfg.M, cfg.c); }

SymbolFactor factor_symbol(double c) {
  if (!(c > 0.0)) throw DomainError("chain coupling c must be > 0");
  SymbolFactor f;
  f.diag = -c;
  f.upper = c;
  // Row of V = (V*)^T is [upper, diag] at columns k-1, k.
  const double v_row[2] = {f.upper, f.diag};
  const double vs_row[2] = {f.diag, f.upper};
  f.product_stencil.assign(3, 0.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) f.product_stencil[static_cast<std::size_t>(i + j)] += v_row[i] * vs_row[j];
  const Tridiagonal v2 = build_potential(1, c);
  f.matches_potential = f.product_stencil[0] == v2.off(0) && f.product_stencil[1] == v2.diag(1) &&
                        f.product_stencil[2] == v2.off(1);
  return f;
}

Vector apply_upper_factor(const Vector& q, double c) {
  const Eigen::Index n = q.size();
  Vector x(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = c * ((k + 1 < n ? q(k + 1) : 0.0) - q(k));
  return x;
}

ChainState sample_invariant(const ChainConfig& cfg, std::mt19937_64& rng) {
  if (!(cfg.beta >= 0.0)) throw DomainError("beta must be >= 0");
  const Tridiagonal v2 = build_potential(cfg);
  const Eigen::Index n = v2.diag.size();
  const double sb = std::sqrt(cfg.beta);
  std::normal_distribution<double> g;
  ChainState s{Vector(n), Vector(n)};
  for (Eigen::Index i = 0; i < n; ++i) s.p(i) = sb * g(rng);

  // V^2 = L L^T with L lower bidiagonal; q = sqrt(beta) L^-T g.
  Vector ld(n), lo(std::max<Eigen::Index>(n - 1, 0));
  ld(0) = std::sqrt(v2.diag(0));
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    lo(i) = v2.off(i) / ld(i);
    ld(i + 1) = std::sqrt(v2.diag(i + 1) - lo(i) * lo(i));
  }
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z(i) = sb * g(rng);
  s.q(n - 1) = z(n - 1) / ld(n - 1);
  for (Eigen::Index i = n - 1; i-- > 0;) s.q(i) = (z(i) - lo(i) * s.q(i + 1)) / ld(i);
  return s;
}

ChainState sample_invariant(const ChainConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  return sample_invariant(cfg, rng);
}

double chain_energy(const ChainState& s, const Tridiagonal& v2) {
  return 0.5 * s.p.squaredNorm() + 0.5 * s.q.dot(v2.apply(s.q));
}

ChainPropagator::ChainPropagator(int sites, double c) : n_(sites), c_(c) {
  if (sites < 1) throw DomainError("chain needs at least one site");
  if (!(c > 0.0)) throw DomainError("chain coupling c must be > 0");
  const int period = 2 * (n_ + 1);
  scale_ = std::sqrt(2.0 / (n_ + 1));
  sine_.assign(static_cast<std::size_t>(period), 0.0);
  const int half = n_ + 1;
  for (int m = 0; m <= half / 2; ++m) sine_[static_cast<std::size_t>(m)] =
      std::sin(std::numbers::pi * m / half);
  for (int m = half / 2 + 1; m <= half; ++m)
    sine_[static_cast<std::size_t>(m)] = sine_[static_cast<std::size_t>(half - m)];
  for (int m = half + 1; m < period; ++m)
    sine_[static_cast<std::size_t>(m)] = -sine_[static_cast<std::size_t>(m - half)];
  omega_.assign(static_cast<std::size_t>(n_ + 1), 0.0);
  for (int k = 1; k <= n_; ++k)
    omega_[static_cast<std::size_t>(k)] = 2.0 * c_ * std::sin(std::numbers::pi * k / (2.0 * half));
  z0_.assign(static_cast<std::size_t>(n_), 0.0);
  z_ = z0_;
}

double ChainPropagator::mode_shape(int mode, int j) const {
  const int period = 2 * (n_ + 1);
  return scale_ * sine_[static_cast<std::size_t>((static_cast<long long>(mode) * j) % period)];
}

void ChainPropagator::transform(const Vector& x, Vector& out) const {
  // The sine transform is its own inverse.
  const int period = 2 * (n_ + 1);
  out.resize(n_);
  for (int k = 1; k <= n_; ++k) {
    int idx = 0;
    double acc = 0.0;
    for (int j = 1; j <= n_; ++j) {
      idx += k;
      if (idx >= period) idx -= period;
      acc += sine_[static_cast<std::size_t>(idx)] * x(j - 1);
    }
    out(k - 1) = scale_ * acc;
  }
}

void ChainPropagator::load(const ChainState& s) {
  if (s.q.size() != n_ || s.p.size() != n_) throw LengthMismatchError("chain state size mismatch");
  Vector alpha, pi;
  transform(s.q, alpha);
  transform(s.p, pi);
  for (int k = 0; k < n_; ++k)
    z0_[static_cast<std::size_t>(k)] = {omega_[static_cast<std::size_t>(k + 1)] * alpha(k), pi(k)};
  z_ = z0_;
  elapsed_ = 0.0;
  anchor_dt_ = 0.0;
  since_anchor_ = 0;
}

ChainState ChainPropagator::state() const {
  Vector alpha(n_), pi(n_);
  for (int k = 0; k < n_; ++k) {
    alpha(k) = z_[static_cast<std::size_t>(k)].real() / omega_[static_cast<std::size_t>(k + 1)];
    pi(k) = z_[static_cast<std::size_t>(k)].imag();
  }
  ChainState s;
  transform(alpha, s.q);
  transform(pi, s.p);
  return s;
}

void ChainPropagator::advance(double dt) {
  if (dt != anchor_dt_) {
    elapsed_ += since_anchor_ * anchor_dt_;
    since_anchor_ = 0;
    anchor_dt_ = dt;
    rot_.resize(static_cast<std::size_t>(n_));
    for (int k = 0; k < n_; ++k)
      rot_[static_cast<std::size_t>(k)] = std::polar(1.0, -omega_[static_cast<std::size_t>(k + 1)] * dt);
  }
  ++since_anchor_;
  if (since_anchor_ % 256 == 0) {
    // Re-anchor on the exact phase so rounding in the recurrence cannot build up.
    const double t = elapsed_ + since_anchor_ * dt;
    for (int k = 0; k < n_; ++k)
      z_[static_cast<std::size_t>(k)] =
          z0_[static_cast<std::size_t>(k)] * std::polar(1.0, -omega_[static_cast<std::size_t>(k + 1)] * t);
  } else {
    for (std::size_t k = 0; k < z_.size(); ++k) z_[k] *= rot_[k];
  }
}

double ChainPropagator::position(int index) const {
  const int period = 2 * (n_ + 1);
  const int j = index + 1;
  int idx = 0;
  double acc = 0.0;
  for (int k = 1; k <= n_; ++k) {
    idx += j;
    if (idx >= period) idx -= period;
    acc += sine_[static_cast<std::size_t>(idx)] * z_[static_cast<std::size_t>(k - 1)].real() /
           omega_[static_cast<std::size_t>(k)];
  }
  return scale_ * acc;
}

double ChainPropagator::momentum(int index) const {
  const int period = 2 * (n_ + 1);
  const int j = index + 1;
  int idx = 0;
  double acc = 0.0;
  for (int k = 1; k <= n_; ++k) {
    idx += j;
    if (idx >= period) idx -= period;
    acc += sine_[static_cast<std::size_t>(idx)] * z_[static_cast<std::size_t>(k - 1)].imag();
  }
  return scale_ * acc;
}

ParticleTrace integrate(const ChainState& state, const ChainConfig& cfg) {
  cfg.validate();
  const int n = cfg.sites();
  if (state.q.size() != n || state.p.size() != n) throw LengthMismatchError("chain state size mismatch");
  ChainPropagator prop(n, cfg.c);
  prop.load(state);
  const std::size_t steps = cfg.steps();
  const double c = cfg.c;
  ParticleTrace tr;
  tr.dt = cfg.dt;
  for (auto* v : {&tr.t, &tr.q0, &tr.p0, &tr.w, &tr.w_bar}) v->resize(steps + 1);
  const int i0 = cfg.M;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double q0 = prop.position(i0);
    const double q1 = prop.position(i0 + 1);
    const double qm = prop.position(i0 - 1);
    const double p0 = prop.momentum(i0);
    const double spring = c * (q1 - q0) + c * (qm - q0);
    tr.t[k] = static_cast<double>(k) * cfg.dt;
    tr.q0[k] = q0;
    tr.p0[k] = p0;
    tr.w[k] = 0.25 * (spring + 2.0 * p0);
    tr.w_bar[k] = 0.25 * (spring - 2.0 * p0);
    if (k < steps) prop.advance(cfg.dt);
  }
  const Tridiagonal v2 = build_potential(cfg);
  tr.energy_start = chain_energy(state, v2);
  tr.energy_end = chain_energy(prop.state(), v2);
  return tr;
}

LangevinResidual langevin_residual(const ParticleTrace& trace, double c) {
  LangevinResidual r;
  const std::size_t n = trace.p0.size();
  if (trace.w.size() != n || trace.w_bar.size() != n) throw LengthMismatchError("trace channels differ");
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double dp = (trace.p0[k + 1] - trace.p0[k - 1]) / (2.0 * trace.dt);
    r.forward = std::max(r.forward, std::abs(dp + 2.0 * c * trace.p0[k] - 4.0 * c * trace.w[k]));
    r.backward = std::max(r.backward, std::abs(dp - 2.0 * c * trace.p0[k] - 4.0 * c * trace.w_bar[k]));
  }
  return r;
}

BrownianModels reduced_models(double c) {
  if (!(c > 0.0)) throw DomainError("chain coupling c must be > 0");
  BrownianModels m;
  m.gamma = Matrix{{0.0, 1.0}, {0.0, -2.0 * c}};
  m.gamma_bar = Matrix{{0.0, 1.0}, {0.0, 2.0 * c}};
  m.input_gain = Vector{{0.0, 4.0 * c}};
  m.Q = RationalFunction(Polynomial({-2.0 * c, 1.0}), Polynomial({2.0 * c, 1.0}));
  return m;
}

double momentum_oracle(double c, double t) {
  using boost::math::quadrature::gauss;
  const double a = 2.0 * c * std::abs(t);
  const int panels = 8 + static_cast<int>(std::ceil(a));
  const double h = std::numbers::pi / panels;
  auto f = [a](double th) { return std::cos(a * std::sin(0.5 * th)); };
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) sum += gauss<double, 20>::integrate(f, i * h, (i + 1) * h);
  return sum / std::numbers::pi;
}

double AutocorrResult::max_deviation() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < lag.size(); ++k) worst = std::max(worst, std::abs(empirical[k] - oracle[k]));
  return worst;
}

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// sum_n x[n] y[n + l] for l = 0..max_lag.
std::vector<double> cross_sums(Eigen::FFT<double>& fft, const std::vector<double>& x,
                               const std::vector<double>& y, std::size_t max_lag) {
  const std::size_t nfft = next_pow2(x.size() + max_lag + 1);
  std::vector<double> xp(nfft, 0.0), yp(nfft, 0.0);
  std::copy(x.begin(), x.end(), xp.begin());
  std::copy(y.begin(), y.end(), yp.begin());
  std::vector<std::complex<double>> fx, fy;
  fft.fwd(fx, xp);
  fft.fwd(fy, yp);
  for (std::size_t k = 0; k < fx.size(); ++k) fx[k] = std::conj(fx[k]) * fy[k];
  std::vector<double> out;
  fft.inv(out, fx);
  out.resize(max_lag + 1);
  return out;
}

struct RunResult {
  std::vector<double> acov, qvar, wpow;
  double p0_sq = 0.0;
};

RunResult one_run(const ChainConfig& cfg, std::size_t run, std::size_t lags) {
  std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(run)};
  std::mt19937_64 rng(seq);
  const ChainState s = sample_invariant(cfg, rng);
  const ParticleTrace tr = integrate(s, cfg);
  const std::size_t n = tr.p0.size();
  Eigen::FFT<double> fft;
  RunResult r;
  const std::vector<double> pp = cross_sums(fft, tr.p0, tr.p0, lags);
  const std::vector<double> qq = cross_sums(fft, tr.q0, tr.q0, lags);
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + tr.q0[i] * tr.q0[i];
  r.acov.resize(lags + 1);
  r.qvar.resize(lags + 1);
  for (std::size_t l = 0; l <= lags; ++l) {
    const double m = static_cast<double>(n - l);
    r.acov[l] = pp[l] / m;
    const double head = prefix[n - l];
    const double tail = prefix[n] - prefix[l];
    r.qvar[l] = (head + tail - 2.0 * qq[l]) / m;
  }
  r.p0_sq = r.acov[0];

  // Hann-windowed periodogram of w.
  const std::size_t nfft = next_pow2(n);
  std::vector<double> xw(nfft, 0.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double win = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1 > 0 ? n - 1 : 1));
    xw[i] = win * tr.w[i];
    wsum += win * win;
  }
  std::vector<std::complex<double>> fw;
  fft.fwd(fw, xw);
  r.wpow.resize(nfft / 2 + 1);
  for (std::size_t k = 0; k <= nfft / 2; ++k) r.wpow[k] = tr.dt * std::norm(fw[k]) / wsum;
  return r;
}

}  // namespace

AutocorrResult momentum_autocorr(const ChainConfig& cfg, int n_runs, double max_lag, unsigned threads) {
  cfg.validate();
  if (n_runs < 1) throw DomainError("autocorrelation needs at least one run");
  const std::size_t steps = cfg.steps();
  const std::size_t lags = static_cast<std::size_t>(std::floor(max_lag / cfg.dt + 1e-9));
  if (lags >= steps) throw DomainError("max lag must be shorter than the trace");

  std::vector<RunResult> runs(static_cast<std::size_t>(n_runs));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_runs));
  auto work = [&](unsigned id) {
    for (std::size_t i = id; i < runs.size(); i += threads) runs[i] = one_run(cfg, i, lags);
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned id = 0; id < threads; ++id)
      pool.emplace_back([&, id] {
        try {
          work(id);
        } catch (...) {
          errors[id] = std::current_exception();
        }
      });
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  AutocorrResult out;
  out.lag.resize(lags + 1);
  out.empirical.assign(lags + 1, 0.0);
  out.oracle.resize(lags + 1);
  out.q_increment_variance.assign(lags + 1, 0.0);
  const std::size_t nf = runs[0].wpow.size();
  out.w_power.assign(nf, 0.0);
  out.w_freq.resize(nf);
  const double inv = 1.0 / n_runs;
  for (const RunResult& r : runs) {
    for (std::size_t l = 0; l <= lags; ++l) {
      out.empirical[l] += inv * r.acov[l];
      out.q_increment_variance[l] += inv * r.qvar[l];
    }
    for (std::size_t k = 0; k < nf; ++k) out.w_power[k] += inv * r.wpow[k];
    out.p0_variance += inv * r.p0_sq;
  }
  const double nfft = 2.0 * static_cast<double>(nf - 1);
  for (std::size_t k = 0; k < nf; ++k) out.w_freq[k] = 2.0 * std::numbers::pi * k / (nfft * cfg.dt);
  for (std::size_t l = 0; l <= lags; ++l) {
    out.lag[l] = static_cast<double>(l) * cfg.dt;
    out.oracle[l] = cfg.beta * momentum_oracle(cfg.c, out.lag[l]);
  }
  out.effective_samples = static_cast<std::size_t>(n_runs) * (steps + 1);
  return out;
}

std::vector<double> isolated_chain_series(int sites, double c, double dt, std::size_t samples,
                                          int kick_site) {
  if (kick_site < 0 || kick_site >= sites) throw DomainError("kick site outside the chain");
  ChainPropagator prop(sites, c);
  ChainState s{Vector::Zero(sites), Vector::Zero(sites)};
  s.p(kick_site) = 1.0;
  prop.load(s);
  std::vector<double> out(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    out[k] = prop.momentum(kick_site);
    prop.advance(dt);
  }
  return out;
}

namespace {
void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}
}  // namespace

void write_csv(std::ostream& os, const ParticleTrace& trace) {
  os << "t,q0,p0,w,wbar\n";
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    put(os, trace.t[k]);
    for (double v : {trace.q0[k], trace.p0[k], trace.w[k], trace.w_bar[k]}) {
      os << ',';
      put(os, v);
    }
    os << '\n';
  }
}

void write_autocorr_csv(std::ostream& os, const AutocorrResult& r) {
  os << "lag,empirical,oracle\n";
  for (std::size_t k = 0; k < r.lag.size(); ++k) {
    put(os, r.lag[k]);
    os << ',';
    put(os, r.empirical[k]);
    os << ',';
    put(os, r.oracle[k]);
    os << '\n';
  }
}

}  // namespace heatbath
