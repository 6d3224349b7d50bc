#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

#include "heatbath/coupling.hpp"

namespace heatbath {

/// Harmonic chain on sites -M..M with clamped ends, unit masses.
struct ChainConfig {
  int M = 2000;
  double c = 1.0;
  double beta = 1.0;
  double dt = 0.05;
  double t_max = 100.0;
  std::uint64_t seed = 0;
  bool reflection_free = true;

  int sites() const noexcept { return 2 * M + 1; }
  std::size_t steps() const;
  /// Throws DomainError for bad parameters and ReflectionWindowError when a
  /// guarded run asks for t_max >= M/c.
  void validate() const;
};

/// Positions and momenta, site k stored at index k + M.
struct ChainState {
  Vector q;
  Vector p;
};

struct Tridiagonal {
  Vector diag;
  Vector off;  // off(i) couples i and i + 1

  Matrix to_dense() const;
  Vector apply(const Vector& x) const;
};

/// V^2: 2c^2 on the diagonal, -c^2 beside it. M >= 1.
Tridiagonal build_potential(int M, double c);
Tridiagonal build_potential(const ChainConfig& cfg);

/// Upper bidiagonal factor V* with (V* q)_k = c (q_{k+1} - q_k).
struct SymbolFactor {
  double diag = 0.0;   // -c
  double upper = 0.0;  // +c
  /// Row stencil of V V*, expected [-c^2, 2c^2, -c^2].
  std::vector<double> product_stencil;
  bool matches_potential = false;
};
SymbolFactor factor_symbol(double c);

/// (V* q)_k for each site index; the site beyond +M is clamped to zero.
Vector apply_upper_factor(const Vector& q, double c);

ChainState sample_invariant(const ChainConfig& cfg, std::mt19937_64& rng);
ChainState sample_invariant(const ChainConfig& cfg);

double chain_energy(const ChainState& s, const Tridiagonal& v2);

struct ParticleTrace {
  double dt = 0.0;
  std::vector<double> t, q0, p0, w, w_bar;
  double energy_start = 0.0;
  double energy_end = 0.0;
};

/// Exact spectral propagator of the truncated chain in Dirichlet modes.
class ChainPropagator {
 public:
  ChainPropagator(int sites, double c);

  int sites() const noexcept { return n_; }
  double frequency(int mode) const { return omega_[static_cast<std::size_t>(mode)]; }
  /// Orthonormal Dirichlet mode `mode` (1-based) at site `j` (1-based).
  double mode_shape(int mode, int j) const;

  void load(const ChainState& s);
  ChainState state() const;
  /// Advances every mode by dt.
  void advance(double dt);
  double position(int index) const;
  double momentum(int index) const;

 private:
  void transform(const Vector& x, Vector& out) const;

  int n_;
  double c_;
  double scale_;
  std::vector<double> sine_;   // sin(pi m / (n+1)), m in [0, 2(n+1))
  std::vector<double> omega_;  // mode frequencies, index 0 unused
  std::vector<std::complex<double>> z0_, z_, rot_;
  double elapsed_ = 0.0, anchor_dt_ = 0.0;
  int since_anchor_ = 0;
};

/// Samples q0, p0 and the site-0 waves every dt on [0, t_max].
ParticleTrace integrate(const ChainState& state, const ChainConfig& cfg);

struct LangevinResidual {
  double forward = 0.0;   // max |p0' + 2c p0 - 4c w|
  double backward = 0.0;  // max |p0' - 2c p0 - 4c w_bar|
};
/// Central differences at interior samples.
LangevinResidual langevin_residual(const ParticleTrace& trace, double c);

/// Forward and backward 2x2 models for (q0, p0) with Q(s) = (s - 2c)/(s + 2c).
struct BrownianModels {
  Matrix gamma;
  Matrix gamma_bar;
  Vector input_gain;
  RationalFunction Q;
};
BrownianModels reduced_models(double c);

/// J0-type symbol integral (1/pi) int_0^pi cos(2 c t sin(theta/2)) dtheta,
/// by composite Gauss-Legendre quadrature.
double momentum_oracle(double c, double t);

struct AutocorrResult {
  std::vector<double> lag;        // time lags
  std::vector<double> empirical;  // E[p0(t) p0(0)]
  std::vector<double> oracle;     // beta * momentum_oracle
  std::vector<double> q_increment_variance;  // E[(q0(t) - q0(0))^2]
  std::vector<double> w_freq, w_power;       // averaged periodogram of w
  double p0_variance = 0.0;
  std::size_t effective_samples = 0;
  double max_deviation() const;  // max |empirical - oracle|
};

/// Ensemble of invariant-measure runs, time-averaged within each run.
/// Run i uses the generator seeded by seed_seq{cfg.seed, i}; results are
/// reduced in run order regardless of `threads`.
AutocorrResult momentum_autocorr(const ChainConfig& cfg, int n_runs, double max_lag,
                                 unsigned threads = 0);

/// Momentum at `kick_site` of an isolated chain of `sites` particles after
/// a unit momentum kick there, sampled every dt.
std::vector<double> isolated_chain_series(int sites, double c, double dt, std::size_t samples,
                                          int kick_site = 0);

/// Header t,q0,p0,w,wbar.
void write_csv(std::ostream& os, const ParticleTrace& trace);
/// Header lag,empirical,oracle.
void write_autocorr_csv(std::ostream& os, const AutocorrResult& r);

}  // namespace heatbath
