#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace heatbath {

struct MBParams {
  double mass = 1.0;
  double kT = 1.0;
  /// Boltzmann constant scale used by the entropy functions.
  double k = 1.0;

  double sigma() const;
  void validate() const;
};

/// Maxwell-Boltzmann speed density 4 pi (m / 2 pi kT)^(3/2) v^2 exp(-m v^2 / 2kT).
double mb_speed_pdf(const MBParams& params, double v);

/// sigma * sqrt(g1^2 + g2^2 + g3^2) with standard Gaussians from mt19937_64(seed).
std::vector<double> sample_mb(const MBParams& params, std::size_t n, std::uint64_t seed);

/// Velocity components of the same stream, three per sample.
std::vector<double> sample_mb_components(const MBParams& params, std::size_t n, std::uint64_t seed);

/// KL divergence between MB distributions at temperatures T0 and T1.
double kl_mb(double T0, double T1);
/// The same divergence by quadrature over the speed density.
double kl_mb_quadrature(double T0, double T1);

/// k * int p log p over velocity space, by quadrature over speed.
double negentropy_mb(const MBParams& params);
/// -k (3/2) log(2 pi e kT / m).
double negentropy_mb_closed(const MBParams& params);

/// Integral of the speed density over [0, inf).
double mb_normalization(const MBParams& params);
/// E[m v^2 / 2] by quadrature.
double mb_mean_kinetic(const MBParams& params);

/// Kolmogorov-Smirnov statistic of `sample` against chi-squared(3).
double ks_statistic_chi2_3(std::vector<double> sample);
/// Asymptotic 1% critical value 1.6276 / sqrt(n).
double ks_critical_1pct(std::size_t n);

struct SeriesStats {
  std::vector<double> acov;   // biased, lag 0..max_lag, mean removed
  double band = 0.0;          // 3 acov[0] / sqrt(n)
  std::vector<double> freq;   // angular frequency, rad per unit time
  std::vector<double> power;  // windowed periodogram

  double fraction_inside_band() const;
};

/// Requires size > 4 max_lag. `dt` scales the periodogram axis.
SeriesStats autocovariance(std::span<const double> series, std::size_t max_lag, double dt = 1.0);

/// 4-term Blackman-Harris windowed periodogram, zero-padded to a power of two.
struct Periodogram {
  std::vector<double> freq, power;
};
Periodogram periodogram(std::span<const double> series, double dt, std::size_t min_pad = 0);

/// Local maxima above threshold * max; maxima within two bins of a larger one
/// are merged into it.
std::vector<std::size_t> spectral_peaks(const Periodogram& p, double threshold);
std::size_t periodicity_probe(std::span<const double> series, double dt, double threshold = 1e-3);

void write_acov_csv(std::ostream& os, const SeriesStats& s);
void write_power_csv(std::ostream& os, const std::vector<double>& freq, const std::vector<double>& power);

}  // namespace heatbath
