#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "wavemotion/errors.hpp"
#include "wavemotion/rng.hpp"

namespace wavemotion {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Ratio of peak period to the spectral period parameter T1: the spectrum
/// parameterized by T1 = Tp / kPeakToMeanPeriodRatio attains its maximum
/// exactly at omega = 2*pi/Tp. Closed form (5/1.76)^(-1/4) inverted; the
/// value is cross-checked by a quadrature/argmax oracle in the test suite.
inline constexpr double kPeakToMeanPeriodRatio = 1.2982679446701691;

struct SeaStateParams {
  double hs = 0.0;          ///< significant wave height [m]
  double t1 = 0.0;          ///< mean wave period parameter [s]
  double tp = 0.0;          ///< peak period [s]
  double depth = 0.0;       ///< water depth [m]
  double gravity = 9.81;    ///< [m/s^2]
  double heading = 0.0;     ///< wave advance direction [rad], 0 = head seas

  void validate() const {
    if (!(hs > 0.0)) throw ConfigError("sea state: hs must be positive");
    if (!(t1 > 0.0)) throw ConfigError("sea state: t1 must be positive");
    if (!(depth > 0.0)) throw ConfigError("sea state: depth must be positive");
    if (!(gravity > 0.0)) throw ConfigError("sea state: gravity must be positive");
    if (heading < 0.0 || heading >= kTwoPi)
      throw ConfigError("sea state: heading must lie in [0, 2*pi)");
  }
};

/// T1 spectral parameter from a given peak period.
inline double mean_period_from_peak(double tp) {
  if (!(tp > 0.0)) throw ConfigError("mean_period_from_peak: tp must be positive");
  return tp / kPeakToMeanPeriodRatio;
}

inline double peak_period_from_mean(double t1) {
  if (!(t1 > 0.0)) throw ConfigError("peak_period_from_mean: t1 must be positive");
  return t1 * kPeakToMeanPeriodRatio;
}

/// Sea state from (Hs, Tp); the T1 parameter is derived.
inline SeaStateParams sea_state_from_peak(double hs, double tp, double depth,
                                          double heading = 0.0,
                                          double gravity = 9.81) {
  SeaStateParams p;
  p.hs = hs;
  p.tp = tp;
  p.t1 = mean_period_from_peak(tp);
  p.depth = depth;
  p.heading = heading;
  p.gravity = gravity;
  p.validate();
  return p;
}

/// Sea state from (Hs, T1); the peak period is derived.
inline SeaStateParams sea_state_from_mean(double hs, double t1, double depth,
                                          double heading = 0.0,
                                          double gravity = 9.81) {
  SeaStateParams p;
  p.hs = hs;
  p.t1 = t1;
  p.tp = peak_period_from_mean(t1);
  p.depth = depth;
  p.heading = heading;
  p.gravity = gravity;
  p.validate();
  return p;
}

/// Modified Pierson-Moskowitz spectral density S(omega) [m^2 s].
///
/// S(w) = Hs^2 T1 * (0.11/2pi) * (w T1/2pi)^-5 * exp[-0.44 (w T1/2pi)^-4]
inline double pm_spectral_density(double omega, const SeaStateParams& params) {
  if (!(omega > 0.0))
    throw std::domain_error("pm_spectral_density: omega must be positive");
  const double x = omega * params.t1 / kTwoPi;
  const double inv4 = 1.0 / (x * x * x * x);
  return params.hs * params.hs * params.t1 * (0.11 / kTwoPi) * (inv4 / x) *
         std::exp(-0.44 * inv4);
}

/// Peak-enhancement exponent Y with the piecewise sigma (0.07 below
/// 5.24/T1, 0.09 above). Published alongside the spectrum but not composed
/// into it; see `pm_spectral_density_enhanced` for the optional gamma^Y form.
inline double peak_enhancement_exponent(double omega, const SeaStateParams& params) {
  if (!(omega > 0.0))
    throw std::domain_error("peak_enhancement_exponent: omega must be positive");
  const double sigma = (omega <= 5.24 / params.t1) ? 0.07 : 0.09;
  const double z = (0.191 * omega * params.t1 - 1.0) / (std::numbers::sqrt2 * sigma);
  return std::exp(-z * z);
}

/// Optional gamma^Y enhancement; gamma = 1 reduces to the base spectrum.
inline double pm_spectral_density_enhanced(double omega, const SeaStateParams& params,
                                           double gamma) {
  if (!(gamma > 0.0))
    throw ConfigError("pm_spectral_density_enhanced: gamma must be positive");
  double s = pm_spectral_density(omega, params);
  if (gamma != 1.0)
    s *= std::pow(gamma, peak_enhancement_exponent(omega, params));
  return s;
}

/// Total spectral energy m0 = Hs^2/16 (closed form for the PM shape).
inline double spectral_m0(const SeaStateParams& params) {
  return params.hs * params.hs / 16.0;
}

/// Fraction of m0 below omega: exp[-0.44 (w T1/2pi)^-4], the closed-form
/// cumulative of the PM density.
inline double spectral_energy_fraction_below(double omega, const SeaStateParams& params) {
  if (omega <= 0.0) return 0.0;
  const double x = omega * params.t1 / kTwoPi;
  return std::exp(-0.44 / (x * x * x * x));
}

/// Frequency below which the given fraction of m0 lies.
inline double spectral_energy_quantile(double fraction, const SeaStateParams& params) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigError("spectral_energy_quantile: fraction must lie in (0, 1)");
  return kTwoPi / params.t1 * std::pow(-0.44 / std::log(fraction), 0.25);
}

/// Symmetric band [w_lo, w_hi] capturing `coverage` of m0.
inline std::pair<double, double> default_frequency_band(const SeaStateParams& params,
                                                        double coverage = 0.999) {
  const double tail = 0.5 * (1.0 - coverage);
  return {spectral_energy_quantile(tail, params),
          spectral_energy_quantile(1.0 - tail, params)};
}

/// Wavenumber k solving omega^2 = g k tanh(k h) by Newton iteration with a
/// bisection fallback; relative residual below 1e-12 for physical inputs.
inline double solve_dispersion(double omega, double h, double g) {
  if (!(omega > 0.0)) throw std::domain_error("solve_dispersion: omega must be positive");
  if (!(h > 0.0)) throw std::domain_error("solve_dispersion: depth must be positive");
  if (!(g > 0.0)) throw std::domain_error("solve_dispersion: gravity must be positive");

  const double w2 = omega * omega;
  const double k_deep = w2 / g;
  if (k_deep * h > 20.0) return k_deep;  // tanh saturated to machine precision

  // f(k) = g k tanh(k h) - w^2 is monotone increasing in k.
  auto f = [&](double k) { return g * k * std::tanh(k * h) - w2; };
  double k = k_deep / std::sqrt(std::tanh(w2 * h / g));  // standard seed, exact in both limits
  if (!(k > 0.0) || !std::isfinite(k)) k = k_deep;

  double lo = 0.0, hi = std::max(k_deep, omega / std::sqrt(g * h)) * 2.0 + 1.0;
  while (f(hi) < 0.0) hi *= 2.0;

  for (int iter = 0; iter < 100; ++iter) {
    const double th = std::tanh(k * h);
    const double res = g * k * th - w2;
    if (std::abs(res) <= 1e-13 * w2) return k;
    (res > 0.0 ? hi : lo) = k;
    const double dres = g * th + g * k * h * (1.0 - th * th);
    double next = k - res / dres;
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);
    k = next;
  }
  throw NumericalError("solve_dispersion: no convergence after 100 iterations");
}

/// Finite sinusoidal decomposition of a spectrum: one component per
/// equal-width frequency bin, uniformly jittered inside the bin so the
/// frequencies are incommensurate, with seeded uniform phases in [-pi, pi).
struct SpectralDiscretization {
  std::size_t n = 0;
  std::vector<double> omegas;       ///< [rad/s], strictly increasing
  std::vector<double> delta_omegas; ///< bin widths [rad/s]
  std::vector<double> amplitudes;   ///< a_i = sqrt(2 S(w_i) dw_i) [m]
  std::vector<double> phases;       ///< in [-pi, pi)
  std::vector<double> wavenumbers;  ///< [rad/m]
  std::vector<double> celerities;   ///< w_i / k_i [m/s]
  std::uint64_t seed = 0;
  double band_energy_fraction = 0.0;  ///< share of m0 inside [w_min, w_max]

  double amplitude_energy() const {
    double e = 0.0;
    for (double a : amplitudes) e += 0.5 * a * a;
    return e;
  }
};

inline SpectralDiscretization discretize_spectrum(const SeaStateParams& params,
                                                  std::size_t n, double omega_min,
                                                  double omega_max,
                                                  std::uint64_t seed) {
  params.validate();
  if (n == 0) throw ConfigError("discretize_spectrum: n must be at least 1");
  if (!(omega_min > 0.0) || !(omega_max > omega_min))
    throw ConfigError("discretize_spectrum: need 0 < omega_min < omega_max");

  SpectralDiscretization d;
  d.n = n;
  d.seed = seed;
  d.band_energy_fraction = spectral_energy_fraction_below(omega_max, params) -
                           spectral_energy_fraction_below(omega_min, params);

  const double dw = (omega_max - omega_min) / static_cast<double>(n);
  Rng rng(seed);
  Rng jitter_rng = rng.split(1);
  Rng phase_rng = rng.split(2);

  d.omegas.reserve(n);
  d.delta_omegas.assign(n, dw);
  d.amplitudes.reserve(n);
  d.phases.reserve(n);
  d.wavenumbers.reserve(n);
  d.celerities.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = omega_min + (static_cast<double>(i) + jitter_rng.next_double()) * dw;
    const double k = solve_dispersion(w, params.depth, params.gravity);
    d.omegas.push_back(w);
    d.amplitudes.push_back(std::sqrt(2.0 * pm_spectral_density(w, params) * dw));
    d.phases.push_back(phase_rng.uniform(-std::numbers::pi, std::numbers::pi));
    d.wavenumbers.push_back(k);
    d.celerities.push_back(w / k);
  }
  return d;
}

/// Convenience: band chosen by the energy-coverage rule.
inline SpectralDiscretization discretize_spectrum(const SeaStateParams& params,
                                                  std::size_t n, std::uint64_t seed,
                                                  double coverage = 0.999) {
  auto [lo, hi] = default_frequency_band(params, coverage);
  return discretize_spectrum(params, n, lo, hi, seed);
}

}  // namespace wavemotion
