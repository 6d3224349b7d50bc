#include "commands.hpp"

#include <iostream>
#include <memory>

#include <heatbath/error.hpp>

namespace heatbath::cli {

namespace ex = experiments;

namespace {

int finish(const Globals& g, const std::string& command, const json& params,
           const std::vector<ex::Check>& checks) {
  write_json(g.out, "summary.json", make_summary(command, g.seed, params, checks));
  print_checks(checks);
  return ex::all_passed(checks) ? 0 : 1;
}

json line_params_json(const ex::LineParams& p) {
  return {{"foster", p.foster},     {"dx", p.dx},
          {"x_max", p.x_max},       {"t_max", p.t_max},
          {"far_end", p.far_end == FarEnd::open ? "open" : "shorted"},
          {"init", p.init},         {"bump_center", p.bump_center},
          {"bump_width", p.bump_width}, {"sigma", p.sigma},
          {"observable_d", p.observable_d}};
}

struct LineFlags {
  ex::LineParams p;
  std::string far_end = "open";
};

void add_line_flags(CLI::App* sub, LineFlags& f) {
  sub->add_option("--foster", f.p.foster, "Foster load, e.g. \"k0 = 1; tank = 1,1\"")->capture_default_str();
  sub->add_option("--dx", f.p.dx, "cell width and time step")->capture_default_str();
  sub->add_option("--x-max", f.p.x_max, "line length")->capture_default_str();
  sub->add_option("--t-max", f.p.t_max, "simulated time")->capture_default_str();
  sub->add_option("--far-end", f.far_end, "open | shorted")
      ->check(CLI::IsMember({"open", "shorted"}))
      ->capture_default_str();
  sub->add_option("--init", f.p.init, "bump | noise")->check(CLI::IsMember({"bump", "noise"}))->capture_default_str();
  sub->add_option("--bump-center", f.p.bump_center)->capture_default_str();
  sub->add_option("--bump-width", f.p.bump_width)->capture_default_str();
  sub->add_option("--sigma", f.p.sigma, "white-noise intensity")->capture_default_str();
  sub->add_option("--observable-d", f.p.observable_d, "feedthrough of y = c xi + d i0")->capture_default_str();
}

ex::LineParams resolve(const LineFlags& f, std::uint64_t seed) {
  ex::LineParams p = f.p;
  p.far_end = f.far_end == "open" ? FarEnd::open : FarEnd::shorted;
  p.seed = seed;
  return p;
}

json line_summary(const ex::LineResult& r) {
  return {{"decay_rate", r.decay_measured ? json(r.decay_rate) : json(nullptr)},
          {"expected_rate", r.expected_rate},
          {"energy_drift", r.energy_drift},
          {"forward_error", r.forward_error},
          {"backward_error", r.backward_error},
          {"output_error", r.output_error},
          {"cells", r.cfg.cells()},
          {"steps", r.cfg.steps()},
          {"coupling", coupling_report(r.pair)}};
}

}  // namespace

std::vector<Command> register_commands(CLI::App& app) {
  std::vector<Command> cmds;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->configurable();
    return sub;
  };

  {
    auto p = std::make_shared<ex::SynthParams>();
    CLI::App* sub = add("synth", "random Foster loads: mirror, inner K, observable invariance");
    sub->add_option("--count", p->count, "number of loads")->capture_default_str();
    sub->add_option("--max-dim", p->max_dim, "largest state dimension")->capture_default_str();
    sub->add_option("--observables", p->observables, "random observables per load")->capture_default_str();
    cmds.push_back({"synth", sub, [p](const Globals& g) {
                      ex::SynthParams q = *p;
                      q.seed = g.seed;
                      const ex::SynthResult r = ex::run_synth(q);
                      json loads = json::array();
                      for (const FosterSpec& s : r.loads) loads.push_back(to_json(s));
                      write_json(g.out, "synth.json",
                                 {{"loads", loads},
                                  {"max_real_eig", r.max_real_eig},
                                  {"mirror_residual", r.mirror},
                                  {"allpass_residual", r.allpass},
                                  {"k_crosscheck", r.crosscheck},
                                  {"observable_residual", r.observable}});
                      return finish(g, "synth", {{"count", q.count}, {"max_dim", q.max_dim}, {"observables", q.observables}},
                                    r.checks);
                    }});
  }

  {
    auto foster = std::make_shared<std::string>("k0 = 1");
    CLI::App* sub = add("couple", "close the loops around one Foster load");
    sub->add_option("--foster", *foster, "Foster load, e.g. \"k0 = 1; tank = 1,1\"")->capture_default_str();
    cmds.push_back({"couple", sub, [foster](const Globals& g) {
                      const ex::CoupleResult r = ex::run_couple(*foster);
                      write_json(g.out, "couple.json", r.report);
                      std::cout << coupling_report(r.pair).dump(2) << '\n';
                      return finish(g, "couple", {{"foster", *foster}}, r.checks);
                    }});
  }

  {
    auto f = std::make_shared<LineFlags>();
    CLI::App* sub = add("line-sim", "truncated transmission line with a lossless load at x = 0");
    add_line_flags(sub, *f);
    cmds.push_back({"line-sim", sub, [f](const Globals& g) {
                      const ex::LineParams p = resolve(*f, g.seed);
                      const ex::LineResult r = ex::run_line(p);
                      write_file(g.out, "boundary.csv", [&](std::ostream& os) { write_csv(os, r.trace); });
                      write_json(g.out, "line.json", line_summary(r));
                      return finish(g, "line-sim", line_params_json(p), r.checks);
                    }});
  }

  {
    auto f = std::make_shared<LineFlags>();
    auto sp = std::make_shared<ex::StringParams>();
    CLI::App* sub = add("string-sim", "vibrating string bath through the line engine");
    add_line_flags(sub, *f);
    sub->add_option("--tau", sp->tau, "tension")->capture_default_str();
    sub->add_option("--rho", sp->rho, "linear density")->capture_default_str();
    cmds.push_back({"string-sim", sub, [f, sp](const Globals& g) {
                      ex::StringParams p = *sp;
                      p.line = resolve(*f, g.seed);
                      const ex::StringResult r = ex::run_string(p);
                      write_file(g.out, "boundary.csv", [&](std::ostream& os) { write_csv(os, r.string_trace); });
                      json s = line_summary(r.line);
                      s["max_trace_difference"] = r.max_trace_difference;
                      s["mirror_residual"] = r.mirror;
                      write_json(g.out, "string.json", s);
                      json params = line_params_json(p.line);
                      params["tau"] = p.tau;
                      params["rho"] = p.rho;
                      return finish(g, "string-sim", params, r.checks);
                    }});
  }

  {
    auto lp = std::make_shared<ex::LangevinParams>();
    auto pp = std::make_shared<ex::PeriodicityParams>();
    CLI::App* sub = add("lattice-sim", "harmonic chain bath: Langevin identities and finite-N periodicity");
    sub->alias("lattice");
    sub->add_option("--M", lp->M, "half-width of the truncated chain")->capture_default_str();
    sub->add_option("--c", lp->c, "spring constant scale")->capture_default_str();
    sub->add_option("--beta", lp->beta, "temperature kT")->capture_default_str();
    sub->add_option("--dt", lp->dt, "sampling step")->capture_default_str();
    sub->add_option("--t-max", lp->t_max, "simulated time")->capture_default_str();
    sub->add_option("--n-min", pp->n_min, "smallest isolated chain")->capture_default_str();
    sub->add_option("--n-max", pp->n_max, "largest isolated chain")->capture_default_str();
    sub->add_option("--periodic-dt", pp->dt, "sampling step of the isolated chains")->capture_default_str();
    sub->add_option("--samples", pp->samples, "samples per isolated chain")->capture_default_str();
    sub->add_option("--peak-threshold", pp->threshold, "peak threshold relative to the maximum")->capture_default_str();
    sub->add_option("--bath-t-max", pp->bath_t_max, "length of the bath run for the broadband contrast")
        ->capture_default_str();
    cmds.push_back({"lattice-sim", sub, [lp, pp](const Globals& g) {
                      ex::LangevinParams l = *lp;
                      l.seed = g.seed;
                      ex::PeriodicityParams q = *pp;
                      q.c = l.c;
                      q.bath_M = l.M;
                      q.seed = g.seed;
                      const ex::LangevinResult r = ex::run_langevin(l);
                      const ex::PeriodicityResult per = ex::run_periodicity(q);
                      write_file(g.out, "particle.csv", [&](std::ostream& os) { write_csv(os, r.trace); });
                      write_json(g.out, "lattice.json",
                                 {{"residual", {{"dt", l.dt}, {"forward", r.coarse.forward}, {"backward", r.coarse.backward}}},
                                  {"residual_half_dt", {{"forward", r.fine.forward}, {"backward", r.fine.backward}}},
                                  {"forward_order", r.forward_order},
                                  {"backward_order", r.backward_order},
                                  {"energy_drift", r.energy_drift},
                                  {"gamma", to_json(r.models.gamma)},
                                  {"gamma_bar", to_json(r.models.gamma_bar)},
                                  {"gamma_eigs", to_json(eigenvalues(r.models.gamma))},
                                  {"gamma_bar_eigs", to_json(eigenvalues(r.models.gamma_bar))},
                                  {"Q", to_json(r.models.Q)}});
                      write_json(g.out, "periodicity.json",
                                 {{"sites", per.sites}, {"peaks", per.peaks}, {"bath_peaks", per.bath_peaks}});
                      std::vector<ex::Check> checks = r.checks;
                      checks.insert(checks.end(), per.checks.begin(), per.checks.end());
                      return finish(g, "lattice-sim",
                                    {{"M", l.M}, {"c", l.c}, {"beta", l.beta}, {"dt", l.dt}, {"t_max", l.t_max},
                                     {"n_min", q.n_min}, {"n_max", q.n_max}, {"periodic_dt", q.dt},
                                     {"samples", q.samples}, {"peak_threshold", q.threshold},
                                     {"bath_t_max", q.bath_t_max}},
                                    checks);
                    }});
  }

  {
    auto p = std::make_shared<ex::InvariantParams>();
    CLI::App* sub = add("autocorr", "invariant-measure sampling and momentum autocorrelation");
    sub->add_option("--M", p->M)->capture_default_str();
    sub->add_option("--c", p->c)->capture_default_str();
    sub->add_option("--beta", p->beta)->capture_default_str();
    sub->add_option("--dt", p->dt, "sampling step")->capture_default_str();
    sub->add_option("--t-max", p->t_max, "length of each run")->capture_default_str();
    sub->add_option("--runs", p->runs, "ensemble size")->capture_default_str();
    sub->add_option("--max-lag", p->max_lag, "largest time lag")->capture_default_str();
    sub->add_option("--draws", p->draws, "independent invariant draws for the variance checks")->capture_default_str();
    sub->add_option("--threads", p->threads, "worker threads, 0 = hardware")->capture_default_str();
    cmds.push_back({"autocorr", sub, [p](const Globals& g) {
                      ex::InvariantParams q = *p;
                      q.seed = g.seed;
                      const ex::InvariantResult r = ex::run_invariant(q);
                      write_file(g.out, "autocorr.csv", [&](std::ostream& os) { write_autocorr_csv(os, r.autocorr); });
                      write_file(g.out, "w_power.csv",
                                 [&](std::ostream& os) { write_power_csv(os, r.autocorr.w_freq, r.autocorr.w_power); });
                      write_json(g.out, "autocorr.json",
                                 {{"p0_variance", r.p0_variance},
                                  {"ensemble_p0_variance", r.autocorr.p0_variance},
                                  {"whitening_cov", to_json(r.whitening_cov)},
                                  {"whitening_diag_error", r.whitening_diag_error},
                                  {"whitening_offdiag_error", r.whitening_offdiag_error},
                                  {"max_deviation", r.autocorr.max_deviation()},
                                  {"effective_samples", r.autocorr.effective_samples}});
                      // threads do not affect results, so they stay out of params
                      return finish(g, "autocorr",
                                    {{"M", q.M}, {"c", q.c}, {"beta", q.beta}, {"dt", q.dt}, {"t_max", q.t_max},
                                     {"runs", q.runs}, {"max_lag", q.max_lag}, {"draws", q.draws}},
                                    r.checks);
                    }});
  }

  {
    auto p = std::make_shared<ex::MBRunParams>();
    CLI::App* sub = add("mb-stats", "Maxwell-Boltzmann sampling, KL divergence, neg-entropy");
    sub->add_option("--mass", p->mass)->capture_default_str();
    sub->add_option("--kT", p->kT)->capture_default_str();
    sub->add_option("--n", p->n, "sample size")->capture_default_str();
    cmds.push_back({"mb-stats", sub, [p](const Globals& g) {
                      ex::MBRunParams q = *p;
                      q.seed = g.seed;
                      const ex::MBRunResult r = ex::run_mb(q);
                      write_json(g.out, "mb.json",
                                 {{"mean_kinetic", r.mean_kinetic},
                                  {"expected_kinetic", 1.5 * q.kT},
                                  {"ks", r.ks},
                                  {"ks_critical", r.ks_critical},
                                  {"kl_max_error", r.kl_max_error},
                                  {"kl_min_offdiag", r.kl_min_offdiag},
                                  {"normalization_error", r.normalization_error},
                                  {"negentropy_error", r.negentropy_error},
                                  {"negentropy_doubling", r.negentropy_doubling}});
                      return finish(g, "mb-stats", {{"mass", q.mass}, {"kT", q.kT}, {"n", q.n}}, r.checks);
                    }});
  }

  {
    auto phi = std::make_shared<std::string>();
    auto p = std::make_shared<ex::InverseParams>();
    CLI::App* sub = add("invert", "spectral density to bath; without --phi, random round trips");
    sub->add_option("--phi", *phi, "spectral density as \"num ; den\", lowest degree first");
    sub->add_option("--count", p->count, "random round trips when --phi is absent")->capture_default_str();
    sub->add_option("--max-dim", p->max_dim, "largest load dimension for random round trips")->capture_default_str();
    cmds.push_back({"invert", sub, [phi, p](const Globals& g) {
                      if (!phi->empty()) {
                        const ex::InvertResult r = ex::run_invert(*phi);
                        write_json(g.out, "invert.json", r.report);
                        std::cout << "Z0 = " << to_pretty(r.synthesis.Z0) << '\n';
                        return finish(g, "invert", {{"phi", *phi}}, r.checks);
                      }
                      ex::InverseParams q = *p;
                      q.seed = g.seed;
                      const ex::InverseResult r = ex::run_inverse(q);
                      write_json(g.out, "invert.json",
                                 {{"max_z_distance", r.max_z_distance},
                                  {"max_round_trip", r.max_round_trip},
                                  {"failures", r.failures},
                                  {"failure_messages", r.failure_messages}});
                      for (const auto& m : r.failure_messages) std::cerr << m << '\n';
                      return finish(g, "invert", {{"count", q.count}, {"max_dim", q.max_dim}}, r.checks);
                    }});
  }

  {
    auto dirs = std::make_shared<std::vector<std::string>>();
    CLI::App* sub = app.add_subcommand("report", "merge summary.json files into one acceptance table");
    sub->add_option("dirs", *dirs, "run directories");
    // report reads --out only when given explicitly
    cmds.push_back({"report", sub, [dirs, sub](const Globals& g) {
                      const bool explicit_out = sub->get_parent()->count("--out") > 0;
                      return report(*dirs, explicit_out ? g.out : std::string());
                    }});
  }
  return cmds;
}

}  // namespace heatbath::cli
