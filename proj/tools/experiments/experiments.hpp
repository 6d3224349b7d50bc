#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <heatbath/lattice.hpp>
#include <heatbath/serialize.hpp>
#include <heatbath/statmech.hpp>
#include <heatbath/waveline.hpp>

namespace heatbath::experiments {

using heatbath::to_json;

struct Check {
  std::string id;    // acceptance criterion, e.g. "C4"
  std::string name;  // the individual condition
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

json to_json(const Check& c);
bool all_passed(const std::vector<Check>& checks);

/// Criteria 1-3 over random Foster loads.
struct SynthParams {
  int count = 100;
  int max_dim = 8;
  int observables = 20;
  std::uint64_t seed = 0;
};
struct SynthResult {
  std::vector<FosterSpec> loads;
  double max_real_eig = 0.0;
  double mirror = 0.0;
  double allpass = 0.0;
  double crosscheck = 0.0;
  double observable = 0.0;
  std::vector<Check> checks;
};
SynthResult run_synth(const SynthParams& p);

/// Single load: certificate, K both ways, mirror.
struct CoupleResult {
  FosterSpec spec;
  LosslessRealization load;
  CertificateReport certificate;
  CoupledModelPair pair;
  json report;
  std::vector<Check> checks;
};
CoupleResult run_couple(const std::string& foster);

/// Criteria 4-5 on the truncated line.
struct LineParams {
  std::string foster = "k0 = 1";
  double dx = 1e-2;
  double x_max = 50.0;
  double t_max = 60.0;
  FarEnd far_end = FarEnd::open;
  std::string init = "bump";  // bump | noise
  double bump_center = 3.0;
  double bump_width = 2.0;
  double sigma = 1.0;
  double observable_d = 0.5;
  std::uint64_t seed = 0;
};
struct LineResult {
  LineConfig cfg;
  CoupledModelPair pair;
  BoundaryTrace trace;
  double decay_rate = 0.0;
  double expected_rate = 0.0;
  double energy_drift = 0.0;
  double forward_error = 0.0;
  double backward_error = 0.0;
  double output_error = 0.0;
  bool decay_measured = false;
  std::vector<Check> checks;
};
LineResult run_line(const LineParams& p);

/// Same scenario through the string parameterization.
struct StringParams {
  LineParams line;
  double tau = 1.0;
  double rho = 1.0;
};
struct StringResult {
  LineResult line;
  BoundaryTrace string_trace;
  double max_trace_difference = 0.0;
  double mirror = 0.0;
  std::vector<Check> checks;
};
StringResult run_string(const StringParams& p);

/// Criterion 6.
struct LangevinParams {
  int M = 2000;
  double c = 1.0;
  double beta = 1.0;
  double dt = 0.05;
  double t_max = 100.0;
  std::uint64_t seed = 0;
};
struct LangevinResult {
  ParticleTrace trace;
  LangevinResidual coarse, fine;
  double forward_order = 0.0;
  double backward_order = 0.0;
  double energy_drift = 0.0;
  BrownianModels models;
  std::vector<Check> checks;
};
LangevinResult run_langevin(const LangevinParams& p);

/// Criterion 7.
struct InvariantParams {
  int M = 2000;
  double c = 1.0;
  double beta = 1.0;
  double dt = 0.5;
  double t_max = 1500.0;
  int runs = 200;
  double max_lag = 1000.0;
  int draws = 100000;
  unsigned threads = 0;
  std::uint64_t seed = 0;
};
struct InvariantResult {
  double p0_variance = 0.0;
  Matrix whitening_cov;  // covariance of V*q at sites -2..2
  double whitening_diag_error = 0.0;
  double whitening_offdiag_error = 0.0;
  AutocorrResult autocorr;
  double autocorr_deviation = 0.0;
  std::vector<Check> checks;
};
InvariantResult run_invariant(const InvariantParams& p);

/// Criterion 8.
struct MBRunParams {
  double mass = 1.0;
  double kT = 1.0;
  std::size_t n = 100000;
  std::uint64_t seed = 0;
};
struct MBRunResult {
  double mean_kinetic = 0.0;
  double ks = 0.0;
  double ks_critical = 0.0;
  double kl_max_error = 0.0;
  double kl_min_offdiag = 0.0;
  double kl_max_diag = 0.0;
  double normalization_error = 0.0;
  double negentropy_error = 0.0;
  double negentropy_doubling = 0.0;
  std::vector<Check> checks;
};
MBRunResult run_mb(const MBRunParams& p);

/// Criterion 9.
struct PeriodicityParams {
  double c = 1.0;
  double dt = 0.1;
  std::size_t samples = 20000;
  int n_min = 3;
  int n_max = 8;
  double threshold = 1e-3;
  int bath_M = 2000;
  double bath_t_max = 1500.0;
  std::uint64_t seed = 0;
};
struct PeriodicityResult {
  std::vector<int> sites;
  std::vector<std::size_t> peaks;
  std::size_t bath_peaks = 0;
  std::vector<Check> checks;
};
PeriodicityResult run_periodicity(const PeriodicityParams& p);

/// Criterion 10.
struct InverseParams {
  int count = 50;
  int max_dim = 8;
  std::uint64_t seed = 0;
};
struct InverseResult {
  double max_z_distance = 0.0;
  double max_round_trip = 0.0;
  int failures = 0;
  std::vector<std::string> failure_messages;
  std::vector<Check> checks;
};
InverseResult run_inverse(const InverseParams& p);

/// One density through spectrum_to_bath.
struct InvertResult {
  BathSynthesis synthesis;
  json report;
  std::vector<Check> checks;
};
InvertResult run_invert(const std::string& phi);

}  // namespace heatbath::experiments
