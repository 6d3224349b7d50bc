#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include <heatbath/error.hpp>

namespace heatbath::experiments {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Check below(std::string id, std::string name, double value, double threshold) {
  return {std::move(id), std::move(name), value < threshold, value, threshold};
}

Check at_least(std::string id, std::string name, double value, double threshold) {
  return {std::move(id), std::move(name), value >= threshold, value, threshold};
}

RowVector gaussian_row(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  RowVector r(n);
  for (Eigen::Index i = 0; i < n; ++i) r(i) = g(rng);
  return r;
}

}  // namespace

json to_json(const Check& c) {
  return {{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"value", c.value},
          {"threshold", c.threshold}};
}

bool all_passed(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

SynthResult run_synth(const SynthParams& p) {
  if (p.count < 1 || p.max_dim < 1 || p.observables < 0)
    throw DomainError("synth needs count >= 1, max_dim >= 1, observables >= 0");
  std::mt19937_64 rng(p.seed);
  SynthResult r;
  r.max_real_eig = -kInf;
  for (int i = 0; i < p.count; ++i) {
    const FosterSpec spec = random_foster(rng, p.max_dim);
    r.loads.push_back(spec);
    const LosslessRealization load = foster_realize(spec);
    const CoupledModelPair pair = close_loops(load);
    const std::vector<Complex> eg = eigenvalues(pair.gamma);
    for (const Complex& z : eg) r.max_real_eig = std::max(r.max_real_eig, z.real());
    r.mirror = std::max(r.mirror, mirror_residual(eg, eigenvalues(pair.gamma_bar)));
    r.allpass = std::max(r.allpass, allpass_grid_residual(pair.K));
    r.crosscheck = std::max(r.crosscheck, coefficient_distance(pair.K, scattering_K_statespace(pair)));
    std::normal_distribution<double> g;
    for (int j = 0; j < p.observables; ++j) {
      const Observable obs = Observable::make(gaussian_row(rng, load.ss.dim()), g(rng), pair.c0);
      const ObservableTransfers t = observable_transfers(pair, obs);
      r.observable = std::max(r.observable, coefficient_distance(t.Wbar.inverse() * t.W, pair.K));
    }
  }
  r.checks.push_back(below("C1", "max Re eig(Gamma) < 0", r.max_real_eig, 0.0));
  r.checks.push_back(below("C1", "eig(Gamma_bar) mirrors -eig(Gamma)", r.mirror, 1e-8));
  r.checks.push_back(below("C2", "| |K(jw)| - 1 | on 200-point grid", r.allpass, 1e-8));
  r.checks.push_back(below("C2", "state-space quotient equals (Z-1)/(Z+1)", r.crosscheck, 1e-8));
  if (p.observables > 0)
    r.checks.push_back(below("C3", "Wbar^-1 W equals K", r.observable, 1e-8));
  return r;
}

CoupleResult run_couple(const std::string& foster) {
  CoupleResult r;
  r.spec = parse_foster(foster);
  r.load = foster_realize(r.spec);
  r.certificate = verify_lossless_certificate(r.load);
  r.pair = close_loops(r.load);
  const RationalFunction Z0 = foster_to_rational(r.spec);
  r.report = coupling_report(r.pair);
  r.report["foster"] = to_json(r.spec);
  r.report["Z0"] = to_json(Z0);
  r.report["load"] = to_json(r.load);
  r.report["certificate"] = to_json(r.certificate);
  r.report["gamma"] = to_json(r.pair.gamma);
  r.report["gamma_bar"] = to_json(r.pair.gamma_bar);
  const double tf = coefficient_distance(transfer_function(r.load.ss), Z0);
  r.checks.push_back({"couple", "lossless certificate", r.certificate.valid(),
                      std::max(r.certificate.lyapunov_residual, r.certificate.port_residual), 1e-8});
  r.checks.push_back(below("couple", "realized transfer equals Foster impedance", tf, 1e-9));
  r.checks.push_back({"couple", "K is inner", is_inner(r.pair.K), allpass_identity_residual(r.pair.K), 1e-8});
  r.checks.push_back(below("couple", "eigenvalue mirror", r.report["mirror_residual"].get<double>(), 1e-8));
  r.checks.push_back(below("couple", "K routes agree", r.pair.k_crosscheck, 1e-8));
  return r;
}

LineResult run_line(const LineParams& p) {
  LineResult r;
  r.cfg.dx = p.dx;
  r.cfg.x_max = p.x_max;
  r.cfg.t_max = p.t_max;
  r.cfg.far_end = p.far_end;
  r.cfg.load = foster_realize(parse_foster(p.foster));
  r.cfg.validate();
  r.pair = close_loops(r.cfg.load);

  const std::size_t n = r.cfg.cells();
  WaveField field;
  if (p.init == "bump") {
    std::vector<double> v(n), i(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = (static_cast<double>(k) + 0.5) * p.dx;
      const double u = std::abs(x - p.bump_center) < 0.5 * p.bump_width
                           ? std::pow(std::cos(std::numbers::pi * (x - p.bump_center) / p.bump_width), 2)
                           : 0.0;
      v[k] = u;
      i[k] = u;
    }
    field = init_waves(v, i);
  } else if (p.init == "noise") {
    std::mt19937_64 rng(p.seed);
    field = init_white_noise(n, p.dx, p.sigma, rng);
  } else {
    throw DomainError("init must be 'bump' or 'noise'");
  }

  const Observable obs = Observable::make(r.cfg.load.ss.c, p.observable_d, r.pair.c0);
  r.trace = propagate(field, r.cfg.steps(), r.cfg, &obs);

  const double e0 = r.trace.energy.front();
  for (double e : r.trace.energy) r.energy_drift = std::max(r.energy_drift, std::abs(e - e0) / e0);

  const ReducedRun fwd = reduced_forward(r.pair, obs, r.trace.w, r.trace.xi.row(0).transpose(), p.dx);
  const ReducedRun bwd = reduced_backward(r.pair, obs, r.trace.w_bar,
                                          r.trace.xi.row(r.trace.xi.rows() - 1).transpose(), p.dx);
  r.forward_error = (fwd.xi - r.trace.xi).cwiseAbs().maxCoeff();
  r.backward_error = (bwd.xi - r.trace.xi).cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < r.trace.steps(); ++k)
    r.output_error = std::max({r.output_error, std::abs(fwd.y[k] - r.trace.y[k]),
                               std::abs(bwd.y[k] - r.trace.y[k])});

  r.expected_rate = -kInf;
  for (const Complex& z : eigenvalues(r.pair.gamma)) r.expected_rate = std::max(r.expected_rate, z.real());

  if (p.init == "bump") {
    const double t1 = p.bump_center + 0.5 * p.bump_width + 1.0;
    if (t1 + 10.0 <= p.t_max) {
      r.decay_rate = decay_rate_probe(r.trace, t1, p.t_max);
      r.decay_measured = true;
      r.checks.push_back(below("C4", "decay rate of |xi| vs max Re eig(Gamma) (" + p.foster + ")",
                               std::abs(r.decay_rate / r.expected_rate - 1.0), 0.05));
    }
  }
  r.checks.push_back(below("C4", "relative energy drift (" + p.foster + ")", r.energy_drift, 1e-9));
  r.checks.push_back(below("C5", "forward model reproduces xi (" + p.foster + ")", r.forward_error, 1e-6));
  r.checks.push_back(below("C5", "backward model reproduces xi (" + p.foster + ")", r.backward_error, 1e-6));
  return r;
}

StringResult run_string(const StringParams& p) {
  StringResult r;
  r.line = run_line(p.line);
  StringConfig sc;
  sc.tau = p.tau;
  sc.rho = p.rho;
  sc.dx = p.line.dx;
  sc.x_max = p.line.x_max;
  sc.t_max = p.line.t_max;
  sc.load = r.line.cfg.load;
  sc.far_end = p.line.far_end;
  const LineConfig cfg = to_line_config(sc);

  // Velocity and tension carry the same profiles the line run used for v and i.
  const std::size_t n = cfg.cells();
  std::vector<double> vel(n), ten(n);
  if (p.line.init == "bump") {
    for (std::size_t k = 0; k < n; ++k) {
      const double x = (static_cast<double>(k) + 0.5) * p.line.dx;
      const double u = std::abs(x - p.line.bump_center) < 0.5 * p.line.bump_width
                           ? std::pow(std::cos(std::numbers::pi * (x - p.line.bump_center) / p.line.bump_width), 2)
                           : 0.0;
      vel[k] = ten[k] = u;
    }
  } else {
    std::mt19937_64 rng(p.line.seed);
    const WaveField f = init_white_noise(n, p.line.dx, p.line.sigma, rng);
    for (std::size_t k = 0; k < n; ++k) {
      vel[k] = f.v(k);
      ten[k] = f.i(k);
    }
  }
  WaveField field = init_string(vel, ten);
  const Observable obs = Observable::make(cfg.load.ss.c, p.line.observable_d, r.line.pair.c0);
  r.string_trace = propagate(field, cfg.steps(), cfg, &obs);
  r.max_trace_difference = (r.string_trace.xi - r.line.trace.xi).cwiseAbs().maxCoeff();
  for (std::size_t k = 0; k < r.string_trace.steps(); ++k)
    r.max_trace_difference = std::max(r.max_trace_difference, std::abs(r.string_trace.w_bar[k] - r.line.trace.w_bar[k]));
  r.mirror = mirror_residual(eigenvalues(r.line.pair.gamma), eigenvalues(r.line.pair.gamma_bar));
  r.checks.push_back(below("string", "string and line runs agree", r.max_trace_difference, 1e-12));
  r.checks.push_back(below("string", "eigenvalue mirror", r.mirror, 1e-8));
  r.checks.push_back(below("string", "backward model reproduces xi", r.line.backward_error, 1e-6));
  return r;
}

LangevinResult run_langevin(const LangevinParams& p) {
  ChainConfig cfg;
  cfg.M = p.M;
  cfg.c = p.c;
  cfg.beta = p.beta;
  cfg.dt = p.dt;
  cfg.t_max = p.t_max;
  cfg.seed = p.seed;
  cfg.validate();
  LangevinResult r;
  const ChainState s = sample_invariant(cfg);
  r.trace = integrate(s, cfg);
  r.coarse = langevin_residual(r.trace, p.c);
  ChainConfig half = cfg;
  half.dt = 0.5 * cfg.dt;
  r.fine = langevin_residual(integrate(s, half), p.c);
  r.forward_order = std::log2(r.coarse.forward / r.fine.forward);
  r.backward_order = std::log2(r.coarse.backward / r.fine.backward);
  r.energy_drift = std::abs(r.trace.energy_end - r.trace.energy_start) / r.trace.energy_start;
  r.models = reduced_models(p.c);

  const std::vector<Complex> eg = eigenvalues(r.models.gamma);
  const std::vector<Complex> egb = eigenvalues(r.models.gamma_bar);
  auto spectrum_error = [](const std::vector<Complex>& got, std::vector<double> want) {
    if (got.size() != want.size()) return kInf;
    std::vector<double> re;
    double err = 0.0;
    for (const Complex& z : got) {
      re.push_back(z.real());
      err = std::max(err, std::abs(z.imag()));
    }
    std::sort(re.begin(), re.end());
    std::sort(want.begin(), want.end());
    for (std::size_t i = 0; i < re.size(); ++i) err = std::max(err, std::abs(re[i] - want[i]));
    return err;
  };
  const double eig_error = std::max(spectrum_error(eg, {0.0, -2.0 * p.c}), spectrum_error(egb, {0.0, 2.0 * p.c}));
  r.checks.push_back(at_least("C6", "forward residual order under dt halving", r.forward_order, 1.9));
  r.checks.push_back(at_least("C6", "backward residual order under dt halving", r.backward_order, 1.9));
  r.checks.push_back(below("C6", "eig(Gamma) = {0,-2c}, eig(Gamma_bar) = {0,2c}", eig_error, 1e-12));
  r.checks.push_back({"C6", "Q(s) = (s-2c)/(s+2c) is inner", is_inner(r.models.Q),
                      allpass_identity_residual(r.models.Q), 1e-8});
  r.checks.push_back(below("C6", "chain energy drift", r.energy_drift, 1e-10));
  r.checks.push_back({"C6", "Gamma_bar != -Gamma", (r.models.gamma_bar + r.models.gamma).cwiseAbs().maxCoeff() > 0.0,
                      (r.models.gamma_bar + r.models.gamma).cwiseAbs().maxCoeff(), 0.0});
  return r;
}

InvariantResult run_invariant(const InvariantParams& p) {
  ChainConfig cfg;
  cfg.M = p.M;
  cfg.c = p.c;
  cfg.beta = p.beta;
  cfg.dt = p.dt;
  cfg.t_max = p.t_max;
  cfg.seed = p.seed;
  cfg.validate();
  if (p.draws < 1) throw DomainError("need at least one invariant draw");
  if (!(p.max_lag <= p.M / (2.0 * p.c) + 1e-12))
    throw DomainError("autocorrelation lags must stay within M/(2c)");
  InvariantResult r;

  // Independent draws in fixed chunks so the sums do not depend on threading.
  constexpr int kChunk = 1000;
  const int chunks = (p.draws + kChunk - 1) / kChunk;
  struct Acc {
    double p0 = 0.0;
    Matrix xx = Matrix::Zero(5, 5);
  };
  std::vector<Acc> acc(static_cast<std::size_t>(chunks));
  unsigned threads = p.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : p.threads;
  threads = std::min<unsigned>(threads, static_cast<unsigned>(chunks));
  auto work = [&](unsigned id) {
    for (int j = static_cast<int>(id); j < chunks; j += static_cast<int>(threads)) {
      std::seed_seq seq{p.seed, std::uint64_t{0x57a7}, static_cast<std::uint64_t>(j)};
      std::mt19937_64 rng(seq);
      const int count = std::min(kChunk, p.draws - j * kChunk);
      Acc& a = acc[static_cast<std::size_t>(j)];
      for (int d = 0; d < count; ++d) {
        const ChainState s = sample_invariant(cfg, rng);
        a.p0 += s.p(p.M) * s.p(p.M);
        Eigen::Matrix<double, 5, 1> x;
        for (int k = -2; k <= 2; ++k) x(k + 2) = p.c * (s.q(p.M + k + 1) - s.q(p.M + k));
        a.xx += x * x.transpose();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned id = 1; id < threads; ++id) pool.emplace_back(work, id);
  work(0);
  for (auto& t : pool) t.join();
  Acc total;
  for (const Acc& a : acc) {
    total.p0 += a.p0;
    total.xx += a.xx;
  }
  const double n = p.draws;
  r.p0_variance = total.p0 / n;
  r.whitening_cov = total.xx / n;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const double v = r.whitening_cov(i, j) / p.beta;
      if (i == j) r.whitening_diag_error = std::max(r.whitening_diag_error, std::abs(v - 1.0));
      else r.whitening_offdiag_error = std::max(r.whitening_offdiag_error, std::abs(v));
    }

  r.autocorr = momentum_autocorr(cfg, p.runs, p.max_lag, p.threads);
  r.autocorr_deviation = r.autocorr.max_deviation() / p.beta;

  r.checks.push_back(below("C7", "sampled p0 variance / beta - 1", std::abs(r.p0_variance / p.beta - 1.0), 0.02));
  r.checks.push_back(below("C7", "diag of cov(V*q)/beta - 1 (3 sqrt(2/n) band)", r.whitening_diag_error,
                           3.0 * std::sqrt(2.0 / n)));
  r.checks.push_back(below("C7", "off-diag of cov(V*q)/beta (3/sqrt(n) band)", r.whitening_offdiag_error,
                           3.0 / std::sqrt(n)));
  r.checks.push_back(below("C7", "E[p0(t)p0(0)] vs symbol-integral oracle / beta", r.autocorr_deviation, 0.05));
  return r;
}

MBRunResult run_mb(const MBRunParams& p) {
  const MBParams mb{p.mass, p.kT, 1.0};
  mb.validate();
  MBRunResult r;
  const std::vector<double> v = sample_mb(mb, p.n, p.seed);
  std::vector<double> x(v.size());
  double ke = 0.0;
  const double s2 = mb.kT / mb.mass;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ke += 0.5 * mb.mass * v[i] * v[i];
    x[i] = v[i] * v[i] / s2;
  }
  r.mean_kinetic = ke / static_cast<double>(v.size());
  r.ks = ks_statistic_chi2_3(std::move(x));
  r.ks_critical = ks_critical_1pct(p.n);

  const double temps[] = {0.25, 0.5, 1.0, 2.0, 3.7};
  r.kl_min_offdiag = kInf;
  for (double a : temps)
    for (double b : temps) {
      const double closed = kl_mb(a, b);
      r.kl_max_error = std::max(r.kl_max_error, std::abs(closed - kl_mb_quadrature(a, b)));
      if (a == b) r.kl_max_diag = std::max(r.kl_max_diag, std::abs(closed));
      else r.kl_min_offdiag = std::min(r.kl_min_offdiag, closed);
    }
  r.normalization_error = std::abs(mb_normalization(mb) - 1.0);
  r.negentropy_error = std::abs(negentropy_mb(mb) - negentropy_mb_closed(mb));
  const MBParams hot{p.mass, 2.0 * p.kT, 1.0};
  r.negentropy_doubling = negentropy_mb(hot) - negentropy_mb(mb);

  r.checks.push_back(below("C8", "mean kinetic energy / (3/2 kT) - 1",
                           std::abs(r.mean_kinetic / (1.5 * p.kT) - 1.0), 0.02));
  r.checks.push_back(below("C8", "KS statistic vs chi2(3), 1% critical value", r.ks, r.ks_critical));
  r.checks.push_back(below("C8", "kl_mb closed form vs quadrature", r.kl_max_error, 1e-6));
  r.checks.push_back({"C8", "kl_mb > 0 off the diagonal, = 0 on it",
                      r.kl_min_offdiag > 0.0 && r.kl_max_diag == 0.0, r.kl_min_offdiag, 0.0});
  r.checks.push_back(below("statmech", "speed density normalization", r.normalization_error, 1e-8));
  r.checks.push_back(below("statmech", "neg-entropy quadrature vs closed form", r.negentropy_error, 1e-8));
  r.checks.push_back(below("statmech", "neg-entropy change on doubling kT vs -(3/2) ln 2",
                           std::abs(r.negentropy_doubling + 1.5 * std::log(2.0)), 1e-8));
  return r;
}

PeriodicityResult run_periodicity(const PeriodicityParams& p) {
  PeriodicityResult r;
  for (int n = p.n_min; n <= p.n_max; ++n) {
    const std::vector<double> series = isolated_chain_series(n, p.c, p.dt, p.samples, 0);
    const std::size_t peaks = periodicity_probe(series, p.dt, p.threshold);
    r.sites.push_back(n);
    r.peaks.push_back(peaks);
    r.checks.push_back({"C9", "isolated chain N = " + std::to_string(n) + " peak count",
                        peaks == static_cast<std::size_t>(n), static_cast<double>(peaks),
                        static_cast<double>(n)});
  }
  if (p.bath_M > 0) {
    ChainConfig cfg;
    cfg.M = p.bath_M;
    cfg.c = p.c;
    cfg.dt = p.dt;
    cfg.t_max = p.bath_t_max;
    cfg.seed = p.seed;
    const ParticleTrace tr = integrate(sample_invariant(cfg), cfg);
    r.bath_peaks = periodicity_probe(tr.p0, p.dt, p.threshold);
  }
  return r;
}

InverseResult run_inverse(const InverseParams& p) {
  InverseResult r;
  std::mt19937_64 rng(p.seed);
  std::uniform_real_distribution<double> dd(0.2, 1.0);
  for (int i = 0; i < p.count; ++i) {
    const FosterSpec spec = random_foster(rng, p.max_dim);
    const RationalFunction Z = foster_to_rational(spec);
    const CoupledModelPair pair = close_loops(foster_realize(spec));
    const Observable obs = Observable::make(gaussian_row(rng, pair.gamma.rows()), dd(rng), pair.c0);
    try {
      const RationalFunction phi = observable_spectrum(pair, obs);
      const BathSynthesis bath = spectrum_to_bath(phi);
      r.max_z_distance = std::max(r.max_z_distance, coefficient_distance(bath.Z0, Z));
    } catch (const Error& e) {
      ++r.failures;
      r.max_z_distance = kInf;
      r.failure_messages.push_back(to_text(spec) + ": [" + e.stage() + "] " + e.what());
    }
    const Inversion inv = invert_K_to_Z(pair.K);
    r.max_round_trip = std::max(r.max_round_trip, coefficient_distance(scattering_K(inv.impedance), pair.K));
  }
  r.checks.push_back(below("C10", "spectrum_to_bath recovers Z0", r.max_z_distance, 1e-7));
  r.checks.push_back(below("C10", "scattering_K(invert_K_to_Z(K)) = K", r.max_round_trip, 1e-8));
  return r;
}

InvertResult run_invert(const std::string& phi_text) {
  InvertResult r;
  const RationalFunction phi = parse_rational(phi_text);
  r.synthesis = spectrum_to_bath(phi);
  const BathSynthesis& b = r.synthesis;
  r.report = {{"phi", to_json(phi)},
              {"W", to_json(b.factors.W)},
              {"Wbar", to_json(b.factors.Wbar)},
              {"K", to_json(b.K)},
              {"Z0", to_json(b.Z0)},
              {"foster", to_json(b.foster)},
              {"load", to_json(b.load)},
              {"observable", {{"c", to_json(b.observable.c)}, {"d", b.observable.d}}},
              {"spectrum_residual", b.spectrum_residual},
              {"coupling", coupling_report(b.pair)}};
  r.checks.push_back(below("invert", "|W(jw)|^2 matches Phi", b.spectrum_residual, 1e-6));
  r.checks.push_back({"invert", "Z0 is lossless", is_lossless_pr(b.Z0), 0.0, 0.0});
  return r;
}

}  // namespace heatbath::experiments
