#include "heatbath/statmech.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <unsupported/Eigen/FFT>

#include "heatbath/error.hpp"

namespace heatbath {

using std::numbers::pi;

void MBParams::validate() const {
  if (!(mass > 0.0) || !(kT > 0.0)) throw DomainError("Maxwell-Boltzmann needs m > 0 and kT > 0");
  if (!(k > 0.0)) throw DomainError("Boltzmann constant scale must be > 0");
}

double MBParams::sigma() const { return std::sqrt(kT / mass); }

namespace {

double log_speed_pdf(const MBParams& p, double v) {
  const double s2 = p.kT / p.mass;
  return std::log(4.0 * pi) - 1.5 * std::log(2.0 * pi * s2) + 2.0 * std::log(v) - v * v / (2.0 * s2);
}

template <typename F>
double half_line(F f) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace

double mb_speed_pdf(const MBParams& params, double v) {
  params.validate();
  if (v < 0.0) throw DomainError("speed must be >= 0");
  const double a = params.mass / (2.0 * pi * params.kT);
  return 4.0 * pi * a * std::sqrt(a) * v * v * std::exp(-params.mass * v * v / (2.0 * params.kT));
}

namespace {
std::vector<double> standard_normals(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<double> out(count);
  for (double& x : out) x = g(rng);
  return out;
}
}  // namespace

std::vector<double> sample_mb_components(const MBParams& params, std::size_t n, std::uint64_t seed) {
  params.validate();
  std::vector<double> out = standard_normals(3 * n, seed);
  const double s = params.sigma();
  for (double& x : out) x *= s;
  return out;
}

std::vector<double> sample_mb(const MBParams& params, std::size_t n, std::uint64_t seed) {
  if (n < 1) throw DomainError("need at least one sample");
  params.validate();
  const std::vector<double> g = standard_normals(3 * n, seed);
  const double s = params.sigma();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = g[3 * i], b = g[3 * i + 1], c = g[3 * i + 2];
    out[i] = s * std::sqrt(a * a + b * b + c * c);
  }
  return out;
}

double kl_mb(double T0, double T1) {
  if (!(T0 > 0.0) || !(T1 > 0.0)) throw DomainError("temperatures must be > 0");
  const double r = T0 / T1;
  return 1.5 * (r - 1.0 - std::log(r));
}

double kl_mb_quadrature(double T0, double T1) {
  if (!(T0 > 0.0) || !(T1 > 0.0)) throw DomainError("temperatures must be > 0");
  const MBParams p0{1.0, T0, 1.0}, p1{1.0, T1, 1.0};
  return half_line([&](double v) {
    if (v <= 0.0) return 0.0;
    const double l0 = log_speed_pdf(p0, v);
    return std::exp(l0) * (l0 - log_speed_pdf(p1, v));
  });
}

double negentropy_mb(const MBParams& params) {
  params.validate();
  const double s2 = params.kT / params.mass;
  const double log_norm = -1.5 * std::log(2.0 * pi * s2);
  // Velocity density f(v) = (2 pi s2)^(-3/2) exp(-|v|^2 / 2 s2) in R^3.
  const double integral = half_line([&](double v) {
    if (v <= 0.0) return 0.0;
    const double log_f = log_norm - v * v / (2.0 * s2);
    return std::exp(log_speed_pdf(params, v)) * log_f;
  });
  return params.k * integral;
}

double negentropy_mb_closed(const MBParams& params) {
  params.validate();
  return -params.k * 1.5 * std::log(2.0 * pi * std::numbers::e * params.kT / params.mass);
}

double mb_normalization(const MBParams& params) {
  params.validate();
  return half_line([&](double v) { return mb_speed_pdf(params, v); });
}

double mb_mean_kinetic(const MBParams& params) {
  params.validate();
  return half_line([&](double v) { return 0.5 * params.mass * v * v * mb_speed_pdf(params, v); });
}

double ks_statistic_chi2_3(std::vector<double> sample) {
  if (sample.empty()) throw DomainError("KS test needs samples");
  std::sort(sample.begin(), sample.end());
  const boost::math::chi_squared_distribution<double> chi2(3.0);
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = boost::math::cdf(chi2, std::max(sample[i], 0.0));
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

double ks_critical_1pct(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

double SeriesStats::fraction_inside_band() const {
  if (acov.size() < 2) return 1.0;
  std::size_t inside = 0;
  for (std::size_t l = 1; l < acov.size(); ++l) inside += std::abs(acov[l]) <= band ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(acov.size() - 1);
}

namespace {

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

Periodogram periodogram(std::span<const double> series, double dt, std::size_t min_pad) {
  const std::size_t n = series.size();
  if (n < 2) throw DomainError("periodogram needs at least two samples");
  if (!(dt > 0.0)) throw DomainError("sampling step must be > 0");
  const std::size_t nfft = next_pow2(std::max(n, min_pad));
  std::vector<double> x(nfft, 0.0);
  double wsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double th = 2.0 * pi * static_cast<double>(i) / static_cast<double>(n - 1);
    const double w = 0.35875 - 0.48829 * std::cos(th) + 0.14128 * std::cos(2 * th) -
                     0.01168 * std::cos(3 * th);
    x[i] = w * series[i];
    wsum += w * w;
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spec;
  fft.fwd(spec, x);
  Periodogram p;
  p.freq.resize(nfft / 2 + 1);
  p.power.resize(nfft / 2 + 1);
  for (std::size_t k = 0; k <= nfft / 2; ++k) {
    p.freq[k] = 2.0 * pi * static_cast<double>(k) / (static_cast<double>(nfft) * dt);
    p.power[k] = dt * std::norm(spec[k]) / wsum;
  }
  return p;
}

SeriesStats autocovariance(std::span<const double> series, std::size_t max_lag, double dt) {
  const std::size_t n = series.size();
  if (n <= 4 * max_lag || n < 2) throw DomainError("series must be longer than 4 * max_lag");
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(n);
  std::vector<double> x(series.begin(), series.end());
  for (double& v : x) v -= mean;
  SeriesStats s;
  s.acov.assign(max_lag + 1, 0.0);
  for (std::size_t l = 0; l <= max_lag; ++l) {
    double acc = 0.0;
    for (std::size_t i = 0; i + l < n; ++i) acc += x[i] * x[i + l];
    s.acov[l] = acc / static_cast<double>(n);
  }
  s.band = 3.0 * s.acov[0] / std::sqrt(static_cast<double>(n));
  Periodogram p = periodogram(x, dt);
  s.freq = std::move(p.freq);
  s.power = std::move(p.power);
  return s;
}

std::vector<std::size_t> spectral_peaks(const Periodogram& p, double threshold) {
  const std::vector<double>& y = p.power;
  if (y.empty()) return {};
  const double top = *std::max_element(y.begin(), y.end());
  if (!(top > 0.0)) return {};
  std::vector<std::size_t> cand;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const bool left = i == 0 || y[i] > y[i - 1];
    const bool right = i + 1 == y.size() || y[i] >= y[i + 1];
    if (left && right && y[i] >= threshold * top) cand.push_back(i);
  }
  std::sort(cand.begin(), cand.end(), [&](std::size_t a, std::size_t b) { return y[a] > y[b]; });
  std::vector<std::size_t> kept;
  for (std::size_t i : cand) {
    const bool near = std::any_of(kept.begin(), kept.end(), [&](std::size_t j) {
      return (i > j ? i - j : j - i) <= 2;
    });
    if (!near) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::size_t periodicity_probe(std::span<const double> series, double dt, double threshold) {
  return spectral_peaks(periodogram(series, dt), threshold).size();
}

namespace {
void put(std::ostream& os, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}
}  // namespace

void write_acov_csv(std::ostream& os, const SeriesStats& s) {
  os << "lag,acov,band\n";
  for (std::size_t l = 0; l < s.acov.size(); ++l) {
    os << l << ',';
    put(os, s.acov[l]);
    os << ',';
    put(os, s.band);
    os << '\n';
  }
}

void write_power_csv(std::ostream& os, const std::vector<double>& freq, const std::vector<double>& power) {
  os << "freq,power\n";
  for (std::size_t k = 0; k < freq.size(); ++k) {
    put(os, freq[k]);
    os << ',';
    put(os, power[k]);
    os << '\n';
  }
}

}  // namespace heatbath
