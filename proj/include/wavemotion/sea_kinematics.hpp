#pragma once

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "wavemotion/errors.hpp"
#include "wavemotion/wave_spectra.hpp"

namespace wavemotion {

/// Elevation time series at a fixed surface point.
struct ProbeSeries {
  double x1 = 0.0;  ///< probe position projected on the wave-advance axis [m]
  double y1 = 0.0;
  double start_time = 0.0;
  double dt = 0.0;
  std::vector<double> values;  ///< elevation [m]

  double time_at(std::size_t i) const { return start_time + dt * static_cast<double>(i); }
};

/// Evaluatable long-crested irregular sea. The field is one-dimensional along
/// the advance axis x1; oblique headings only rotate the sampling frame
/// (probe coordinates are projected with x1 = x cos(beta) + y sin(beta)).
///
/// Depth convention: x2 = 0 at the mean free surface, negative downward,
/// bottom at x2 = -h.
struct WaveField {
  SpectralDiscretization discretization;
  double depth = 0.0;
  double density = 1025.0;  ///< [kg/m^3]
  double gravity = 9.81;
  double heading = 0.0;  ///< beta [rad]

  double project(double x, double y) const {
    return x * std::cos(heading) + y * std::sin(heading);
  }
};

inline WaveField make_wave_field(const SeaStateParams& params,
                                 const SpectralDiscretization& disc,
                                 double density = 1025.0) {
  WaveField f;
  f.discretization = disc;
  f.depth = params.depth;
  f.density = density;
  f.gravity = params.gravity;
  f.heading = params.heading;
  return f;
}

namespace detail {

/// cosh[k(x2+h)]/sinh(kh) and sinh[k(x2+h)]/sinh(kh) in exponential-ratio
/// form. Naive sinh/cosh overflow near k*h ~ 700; these stay finite for any
/// physical depth and reduce to e^{k x2} in deep water.
inline std::pair<double, double> depth_profile(double k, double x2, double h) {
  const double num_p = std::exp(k * x2);
  const double num_m = std::exp(-k * (x2 + 2.0 * h));
  const double den = -std::expm1(-2.0 * k * h);  // 1 - e^{-2kh}
  return {(num_p + num_m) / den, (num_p - num_m) / den};
}

}  // namespace detail

/// Surface elevation zeta(x1, t) = sum a_n cos[k_n(x1 - c_n t) + eps_n].
inline double elevation(const WaveField& field, double x1, double t) {
  const auto& d = field.discretization;
  double z = 0.0;
  for (std::size_t i = 0; i < d.n; ++i)
    z += d.amplitudes[i] *
         std::cos(d.wavenumbers[i] * (x1 - d.celerities[i] * t) + d.phases[i]);
  return z;
}

/// Particle velocity (u horizontal, v vertical) at depth x2 in [-h, 0].
inline std::pair<double, double> velocity(const WaveField& field, double x1,
                                          double x2, double t) {
  if (x2 < -field.depth)
    throw std::domain_error("velocity: x2 below the sea bottom");
  const auto& d = field.discretization;
  double u = 0.0, v = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double phase =
        d.wavenumbers[i] * (x1 - d.celerities[i] * t) + d.phases[i];
    const auto [cp, sp] = detail::depth_profile(d.wavenumbers[i], x2, field.depth);
    const double aw = d.amplitudes[i] * d.omegas[i];
    u += aw * cp * std::cos(phase);
    v += aw * sp * std::sin(phase);
  }
  return {u, v};
}

/// Particle acceleration (du/dt, dv/dt): exact time derivatives of the
/// velocity sums.
inline std::pair<double, double> acceleration(const WaveField& field, double x1,
                                              double x2, double t) {
  if (x2 < -field.depth)
    throw std::domain_error("acceleration: x2 below the sea bottom");
  const auto& d = field.discretization;
  double du = 0.0, dv = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double phase =
        d.wavenumbers[i] * (x1 - d.celerities[i] * t) + d.phases[i];
    const auto [cp, sp] = detail::depth_profile(d.wavenumbers[i], x2, field.depth);
    const double aw2 = d.amplitudes[i] * d.omegas[i] * d.omegas[i];
    du += aw2 * cp * std::sin(phase);
    dv -= aw2 * sp * std::cos(phase);
  }
  return {du, dv};
}

/// Dynamic pressure p(x1, x2, t) [Pa].
inline double dynamic_pressure(const WaveField& field, double x1, double x2,
                               double t) {
  if (x2 < -field.depth)
    throw std::domain_error("dynamic_pressure: x2 below the sea bottom");
  const auto& d = field.discretization;
  double p = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const double phase =
        d.wavenumbers[i] * (x1 - d.celerities[i] * t) + d.phases[i];
    const auto [cp, sp] = detail::depth_profile(d.wavenumbers[i], x2, field.depth);
    (void)sp;
    p += d.amplitudes[i] * field.density * field.gravity * cp * std::cos(phase);
  }
  return p;
}

/// Elevation sampled at probe locations on a uniform time grid. Probe (x, y)
/// coordinates are projected onto the advance axis.
inline std::vector<ProbeSeries> probe_series(
    const WaveField& field, const std::vector<std::pair<double, double>>& probes,
    double t0, double dt, std::size_t steps) {
  if (probes.empty()) throw ConfigError("probe_series: probe list is empty");
  if (!(dt > 0.0)) throw ConfigError("probe_series: dt must be positive");
  if (steps == 0) throw ConfigError("probe_series: steps must be at least 1");

  std::vector<ProbeSeries> out;
  out.reserve(probes.size());
  for (const auto& [x, y] : probes) {
    ProbeSeries s;
    s.x1 = field.project(x, y);
    s.y1 = y;
    s.start_time = t0;
    s.dt = dt;
    s.values.resize(steps);
    for (std::size_t i = 0; i < steps; ++i)
      s.values[i] = elevation(field, s.x1, t0 + dt * static_cast<double>(i));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace wavemotion
