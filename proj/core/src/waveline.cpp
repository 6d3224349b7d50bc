#include "heatbath/waveline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "heatbath/error.hpp"

namespace heatbath {

std::size_t LineConfig::cells() const { return static_cast<std::size_t>(std::llround(x_max / dx)); }

std::size_t LineConfig::steps() const { return static_cast<std::size_t>(std::llround(t_max / dx)); }

void LineConfig::validate() const {
  if (!(dx > 0.0) || !(x_max > 0.0) || !(t_max >= 0.0))
    throw DomainError("line needs dx > 0, x_max > 0, t_max >= 0");
  if (cells() < 1) throw DomainError("line has no cells");
  if (std::abs(static_cast<double>(cells()) * dx - x_max) > 1e-9 * x_max)
    throw DomainError("x_max must be a whole number of cells");
  if (reflection_free && !(t_max < 2.0 * x_max))
    throw ReflectionWindowError("reflection-free run needs t_max < 2 x_max");
  load.ss.validate();
}

WaveField::WaveField(std::vector<double> a_prime, std::vector<double> b_prime)
    : a_(std::move(a_prime)), b_(std::move(b_prime)), reflected_(a_.size(), 0) {
  if (a_.size() != b_.size()) throw LengthMismatchError("a' and b' differ in length");
  if (a_.empty()) throw DomainError("wave field needs at least one cell");
}

std::vector<double> WaveField::a_prime_values() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = a_prime(k);
  return out;
}

std::vector<double> WaveField::b_prime_values() const {
  std::vector<double> out(size());
  for (std::size_t k = 0; k < size(); ++k) out[k] = b_prime(k);
  return out;
}

WaveField init_waves(std::span<const double> v0, std::span<const double> i0) {
  if (v0.size() != i0.size()) throw LengthMismatchError("v0 and i0 differ in length");
  std::vector<double> a(v0.size()), b(v0.size());
  for (std::size_t k = 0; k < v0.size(); ++k) {
    if (!std::isfinite(v0[k]) || !std::isfinite(i0[k]))
      throw DomainError("initial data must be finite");
    a[k] = 0.5 * (v0[k] + i0[k]);
    b[k] = 0.5 * (v0[k] - i0[k]);
  }
  return WaveField(std::move(a), std::move(b));
}

WaveField init_white_noise(std::size_t cells, double dx, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, sigma / std::sqrt(dx));
  std::vector<double> v(cells), i(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    v[k] = g(rng);
    i[k] = g(rng);
  }
  return init_waves(v, i);
}

double line_energy(const WaveField& field, double dx) {
  double sum = 0.0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double a = field.a_prime(k), b = field.b_prime(k);
    sum += a * a + b * b;
  }
  return dx * sum;
}

double total_energy(const WaveField& field, const LineConfig& cfg) {
  double load = 0.0;
  if (field.xi.size() > 0) load = 0.5 * field.xi.dot(cfg.load.omega * field.xi);
  return line_energy(field, cfg.dx) + load + field.energy_out;
}

TrapezoidStepper::TrapezoidStepper(const Matrix& G, const Vector& g, double dt) {
  const Matrix I = Matrix::Identity(G.rows(), G.cols());
  plus_ = I + 0.5 * dt * G;
  minus_ = I - 0.5 * dt * G;
  lu_minus_.compute(minus_);
  lu_plus_.compute(plus_);
  gain_ = dt * g;
}

Vector TrapezoidStepper::step(const Vector& x, double u) const {
  return lu_minus_.solve(plus_ * x + gain_ * u);
}

Vector TrapezoidStepper::step_back(const Vector& x_next, double u) const {
  return lu_plus_.solve(minus_ * x_next - gain_ * u);
}

struct FieldAccess {
  static double pop_a(WaveField& f, bool& reflected) {
    const double v = f.a_[f.ha_];
    reflected = f.reflected_[f.ha_] != 0;
    return v;
  }
  // Shifts both families one cell; returns the b' value leaving at the far end.
  static double shift(WaveField& f, double beta, double inject, bool inject_reflected) {
    const std::size_t n = f.a_.size();
    const std::size_t slot_a = f.ha_;
    f.ha_ = (f.ha_ + 1) % n;
    f.a_[slot_a] = inject;
    f.reflected_[slot_a] = inject_reflected ? 1 : 0;
    f.hb_ = (f.hb_ + n - 1) % n;
    const double leaving = f.b_[f.hb_];
    f.b_[f.hb_] = beta;
    return leaving;
  }
  static double last_b(const WaveField& f) { return f.b_prime(f.size() - 1); }
};

BoundaryTrace propagate(WaveField& field, std::size_t steps, const LineConfig& cfg,
                        const Observable* obs, std::size_t energy_samples) {
  cfg.validate();
  if (field.size() != cfg.cells()) throw LengthMismatchError("field does not match the line grid");
  const StateSpace& ss = cfg.load.ss;
  const Eigen::Index n = ss.dim();
  if (field.xi.size() == 0) field.xi = Vector::Zero(n);
  if (field.xi.size() != n) throw LengthMismatchError("load state does not match the load");

  RowVector c = ss.c;
  double d = 0.0;
  if (obs) {
    if (obs->c.size() != n) throw LengthMismatchError("observable does not match the load");
    c = obs->c;
    d = obs->d;
  }
  const Matrix gamma = ss.A - ss.b * ss.c;
  const TrapezoidStepper stepper(gamma, 2.0 * ss.b, cfg.dx);

  BoundaryTrace tr;
  tr.dt = cfg.dx;
  tr.t.resize(steps + 1);
  tr.xi.resize(static_cast<Eigen::Index>(steps + 1), n);
  tr.y.resize(steps);
  tr.w.resize(steps);
  tr.w_bar.resize(steps);
  tr.v0.resize(steps);
  const std::size_t stride = energy_samples == 0 ? steps + 1 : std::max<std::size_t>(1, steps / energy_samples);

  for (std::size_t k = 0; k <= steps; ++k) {
    tr.t[k] = static_cast<double>(k) * cfg.dx;
    tr.xi.row(static_cast<Eigen::Index>(k)) = field.xi.transpose();
    if (energy_samples > 0 && (k % stride == 0 || k == steps)) {
      tr.energy_t.push_back(tr.t[k]);
      tr.energy.push_back(total_energy(field, cfg));
    }
    if (k == steps) break;

    bool reflected = false;
    const double w = FieldAccess::pop_a(field, reflected);
    if (reflected && cfg.reflection_free)
      throw ReflectionWindowError("far-end reflection reached the load at t = " +
                                  std::to_string(tr.t[k]));
    const Vector next = stepper.step(field.xi, w);
    const Vector mid = 0.5 * (field.xi + next);
    const double v0 = ss.c.dot(mid);
    const double beta = v0 - w;
    tr.w[k] = w;
    tr.w_bar[k] = -beta;
    tr.v0[k] = v0;
    tr.y[k] = c.dot(mid) + d * (w - beta);
    field.xi = next;

    const double far_b = FieldAccess::last_b(field);
    double inject = 0.0;
    bool tagged = false;
    if (cfg.far_end == FarEnd::shorted) {
      inject = -far_b;
      tagged = far_b != 0.0;
    }
    const double leaving = FieldAccess::shift(field, beta, inject, tagged);
    if (cfg.far_end == FarEnd::open) field.energy_out += cfg.dx * leaving * leaving;
  }
  return tr;
}

ReducedRun reduced_forward(const CoupledModelPair& pair, const Observable& obs,
                           std::span<const double> w, const Vector& xi0, double dt) {
  const Eigen::Index n = pair.gamma.rows();
  if (xi0.size() != n || obs.h.size() != n) throw LengthMismatchError("reduced model size mismatch");
  const TrapezoidStepper stepper(pair.gamma, pair.input_gain, dt);
  ReducedRun out;
  out.xi.resize(static_cast<Eigen::Index>(w.size() + 1), n);
  out.y.resize(w.size());
  Vector x = xi0;
  out.xi.row(0) = x.transpose();
  for (std::size_t k = 0; k < w.size(); ++k) {
    const Vector next = stepper.step(x, w[k]);
    out.y[k] = obs.h.dot(0.5 * (x + next)) + 2.0 * obs.d * w[k];
    x = next;
    out.xi.row(static_cast<Eigen::Index>(k + 1)) = x.transpose();
  }
  return out;
}

ReducedRun reduced_backward(const CoupledModelPair& pair, const Observable& obs,
                            std::span<const double> w_bar, const Vector& xiT, double dt) {
  const Eigen::Index n = pair.gamma_bar.rows();
  if (xiT.size() != n || obs.h_bar.size() != n)
    throw LengthMismatchError("reduced model size mismatch");
  const TrapezoidStepper stepper(pair.gamma_bar, pair.input_gain, dt);
  const std::size_t steps = w_bar.size();
  ReducedRun out;
  out.xi.resize(static_cast<Eigen::Index>(steps + 1), n);
  out.y.resize(steps);
  Vector x = xiT;
  out.xi.row(static_cast<Eigen::Index>(steps)) = x.transpose();
  for (std::size_t k = steps; k-- > 0;) {
    const Vector prev = stepper.step_back(x, w_bar[k]);
    out.y[k] = obs.h_bar.dot(0.5 * (x + prev)) + 2.0 * obs.d * w_bar[k];
    x = prev;
    out.xi.row(static_cast<Eigen::Index>(k)) = x.transpose();
  }
  return out;
}

double decay_rate_probe(const BoundaryTrace& trace, double t1, double t2, double w_tol) {
  if (!(t2 > t1)) throw DomainError("decay window needs t2 > t1");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < trace.t.size(); ++k) {
    const double t = trace.t[k];
    if (t < t1 || t > t2) continue;
    if (k < trace.w.size() && t < t2 && std::abs(trace.w[k]) > w_tol)
      throw ContaminatedWindowError("incoming wave is active inside the decay window at t = " +
                                    std::to_string(t));
    const double norm = trace.xi.row(static_cast<Eigen::Index>(k)).norm();
    if (!(norm > 0.0)) throw DegenerateInputError("load state vanishes inside the decay window");
    const double y = std::log(norm);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++count;
  }
  if (count < 2) throw DomainError("decay window holds fewer than two samples");
  const double m = static_cast<double>(count);
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void write_csv(std::ostream& os, const BoundaryTrace& trace) {
  const Eigen::Index n = trace.xi.cols();
  os << "t";
  for (Eigen::Index j = 0; j < n; ++j) os << ",xi_" << (j + 1);
  os << ",y,w,wbar\n";
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t k = 0; k < trace.steps(); ++k) {
    put(trace.t[k]);
    for (Eigen::Index j = 0; j < n; ++j) {
      os << ',';
      put(trace.xi(static_cast<Eigen::Index>(k), j));
    }
    os << ',';
    put(trace.y[k]);
    os << ',';
    put(trace.w[k]);
    os << ',';
    put(trace.w_bar[k]);
    os << '\n';
  }
}

LineConfig to_line_config(const StringConfig& cfg) {
  if (!(cfg.tau > 0.0) || !(cfg.rho > 0.0)) throw DomainError("string needs tau, rho > 0");
  if (std::abs(cfg.tau / cfg.rho - 1.0) > 1e-12)
    throw DomainError("string engine runs in units with tau/rho = 1");
  LineConfig line;
  line.dx = cfg.dx;
  line.x_max = cfg.x_max;
  line.t_max = cfg.t_max;
  line.load = cfg.load;
  line.far_end = cfg.far_end;
  line.reflection_free = cfg.reflection_free;
  return line;
}

WaveField init_string(std::span<const double> velocity, std::span<const double> tension) {
  return init_waves(velocity, tension);
}

}  // namespace heatbath
