#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "heatbath/coupling.hpp"

namespace heatbath {

enum class FarEnd { open, shorted };

/// Truncated line [0, x_max] with unit wave speed, stepped at dt = dx.
struct LineConfig {
  double dx = 1e-2;
  double x_max = 50.0;
  double t_max = 10.0;
  LosslessRealization load;
  FarEnd far_end = FarEnd::open;
  bool reflection_free = true;

  std::size_t cells() const;
  std::size_t steps() const;
  /// Throws DomainError for bad sizes and ReflectionWindowError when a
  /// reflection-free run asks for t_max >= 2 x_max.
  void validate() const;
};

/// Line state as incoming (a') and outgoing (b') cell averages plus the load
/// state. Cell k covers [k dx, (k+1) dx]; a' moves toward x = 0, b' away.
class WaveField {
 public:
  WaveField() = default;
  WaveField(std::vector<double> a_prime, std::vector<double> b_prime);

  std::size_t size() const noexcept { return a_.size(); }
  double a_prime(std::size_t k) const noexcept { return a_[(ha_ + k) % a_.size()]; }
  double b_prime(std::size_t k) const noexcept { return b_[(hb_ + k) % b_.size()]; }
  double v(std::size_t k) const noexcept { return a_prime(k) + b_prime(k); }
  double i(std::size_t k) const noexcept { return a_prime(k) - b_prime(k); }
  std::vector<double> a_prime_values() const;
  std::vector<double> b_prime_values() const;

  Vector xi;
  /// Energy carried out through an open far end so far.
  double energy_out = 0.0;

 private:
  friend struct FieldAccess;
  std::vector<double> a_, b_;
  std::vector<std::uint8_t> reflected_;  // tags content of a_ injected at the far end
  std::size_t ha_ = 0, hb_ = 0;
};

/// a' = (v0 + i0)/2, b' = (v0 - i0)/2.
WaveField init_waves(std::span<const double> v0, std::span<const double> i0);

/// I.i.d. N(0, sigma^2/dx) samples per cell for v0 and i0.
WaveField init_white_noise(std::size_t cells, double dx, double sigma, std::mt19937_64& rng);

/// dx * sum(a'^2 + b'^2) + xi^T Omega xi / 2 + energy_out.
double total_energy(const WaveField& field, const LineConfig& cfg);
double line_energy(const WaveField& field, double dx);

/// Boundary samples. Node n is t = n dt; interval values y, w, w_bar, v0 are
/// the constant or midpoint values over [t_n, t_{n+1}].
struct BoundaryTrace {
  double dt = 0.0;
  std::vector<double> t;  // steps + 1 nodes
  Matrix xi;              // (steps + 1) x n
  std::vector<double> y, w, w_bar, v0;
  std::vector<double> energy_t, energy;

  std::size_t steps() const noexcept { return w.size(); }
};

/// Trapezoidal map for x' = G x + g u with u constant over each step.
class TrapezoidStepper {
 public:
  TrapezoidStepper(const Matrix& G, const Vector& g, double dt);
  Vector step(const Vector& x, double u) const;
  /// Solves the same relation for x_n given x_{n+1}.
  Vector step_back(const Vector& x_next, double u) const;

 private:
  Matrix plus_, minus_;
  Eigen::PartialPivLU<Matrix> lu_minus_, lu_plus_;
  Vector gain_;
};

/// Advances the field by `steps` exact shifts with the load at x = 0.
/// The observable defaults to y = v0 = c0 xi when omitted.
BoundaryTrace propagate(WaveField& field, std::size_t steps, const LineConfig& cfg,
                        const Observable* obs = nullptr, std::size_t energy_samples = 100);

struct ReducedRun {
  Matrix xi;  // nodes
  std::vector<double> y;
};

/// x' = Gamma x + 2 b0 w, y = h x + 2 d w.
ReducedRun reduced_forward(const CoupledModelPair& pair, const Observable& obs,
                           std::span<const double> w, const Vector& xi0, double dt);
/// x' = Gamma_bar x + 2 b0 w_bar integrated from the terminal state,
/// y = h_bar x + 2 d w_bar.
ReducedRun reduced_backward(const CoupledModelPair& pair, const Observable& obs,
                            std::span<const double> w_bar, const Vector& xiT, double dt);

/// Least-squares slope of log|xi(t)| over nodes in [t1, t2]. Throws
/// ContaminatedWindowError if |w| exceeds w_tol inside the window and
/// DegenerateInputError if xi vanishes there.
double decay_rate_probe(const BoundaryTrace& trace, double t1, double t2, double w_tol = 1e-12);

/// Header t,xi_1..xi_n,y,w,wbar; one row per step; %.17g.
void write_csv(std::ostream& os, const BoundaryTrace& trace);

/// Vibrating string under tau/rho = 1: vertical velocity and tension map to
/// (v, i) and the line engine runs unchanged.
struct StringConfig {
  double tau = 1.0;
  double rho = 1.0;
  double dx = 1e-2;
  double x_max = 50.0;
  double t_max = 10.0;
  LosslessRealization load;
  FarEnd far_end = FarEnd::open;
  bool reflection_free = true;
};
LineConfig to_line_config(const StringConfig& cfg);
WaveField init_string(std::span<const double> velocity, std::span<const double> tension);

}  // namespace heatbath
