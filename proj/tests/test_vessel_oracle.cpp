#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wavemotion/vessel_oracle.hpp"

using namespace wavemotion;

namespace {

WaveField zero_field(double depth = 50.0) {
  SpectralDiscretization d;
  d.n = 1;
  d.amplitudes = {0.0};
  d.omegas = {1.0};
  d.phases = {0.0};
  d.delta_omegas = {0.1};
  d.wavenumbers = {solve_dispersion(1.0, depth, 9.81)};
  d.celerities = {1.0 / d.wavenumbers[0]};
  WaveField f;
  f.discretization = d;
  f.depth = depth;
  return f;
}

WaveField single_wave(double amp, double omega, double phase, double depth,
                      double beta = 0.0) {
  SpectralDiscretization d;
  d.n = 1;
  d.amplitudes = {amp};
  d.omegas = {omega};
  d.phases = {phase};
  d.delta_omegas = {0.1};
  d.wavenumbers = {solve_dispersion(omega, depth, 9.81)};
  d.celerities = {omega / d.wavenumbers[0]};
  WaveField f;
  f.discretization = d;
  f.depth = depth;
  f.heading = beta;
  return f;
}

WaveField irregular_field(const SeaStateParams& sea, std::uint64_t seed) {
  return make_wave_field(sea, discretize_spectrum(sea, 200, seed));
}

}  // namespace

TEST_CASE("excitation: zero field, head-seas roll symmetry, scalar oracle") {
  SUBCASE("zero-amplitude field forces nothing") {
    const auto f = zero_field();
    const auto p = dtmb_3dof_preset();
    for (double t : {0.0, 3.1, 47.0}) {
      const auto [fz, mt, mp] = excitation(f, p, t);
      CHECK(fz == 0.0);
      CHECK(mt == 0.0);
      CHECK(mp == 0.0);
    }
  }

  SUBCASE("head seas excite no roll") {
    const auto sea = sea_state_from_peak(10.66, 13.4, 3000.0, 0.0);
    const auto f = irregular_field(sea, 8);
    const auto p = dtmb_3dof_preset();
    for (double t = 0.0; t < 50.0; t += 2.7)
      CHECK(excitation(f, p, t)[2] == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("three-probe heave force matches independent scalar summation") {
    const auto f = single_wave(0.2, 1.8, 0.4, 30.0);
    VesselParams p = catamaran_2dof_preset();
    p.heave.c_elevation = 1000.0;
    p.heave.c_velocity = 55.0;
    p.heave.c_acceleration = 7.0;
    p.heave.probes = {{1.0, 0.0, 0.5}, {-2.0, 0.0, 0.3}, {0.4, 0.0, 0.2}};
    const double t = 2.9;
    double expected = 0.0;
    for (const auto& pr : p.heave.probes) {
      const double z = elevation(f, pr.x, t);
      const double v = velocity(f, pr.x, 0.0, t).second;
      const double a = acceleration(f, pr.x, 0.0, t).second;
      expected += pr.weight * (1000.0 * z + 55.0 * v + 7.0 * a);
    }
    CHECK(excitation(f, p, t)[0] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("integrate: zero forcing, zero state stays identically zero") {
  const auto f = zero_field();
  const auto p = catamaran_2dof_preset();
  const auto rec = integrate(f, p, 0.0, p.dt, 500);
  for (std::size_t i = 0; i < rec.size(); ++i) {
    CHECK(rec.heave[i] == 0.0);
    CHECK(rec.pitch[i] == 0.0);
    CHECK(rec.roll[i] == 0.0);
  }
}

TEST_CASE("integrate: undamped free oscillation conserves energy (1e4 steps)") {
  VesselParams p = catamaran_2dof_preset();
  p.heave.damping = 0.0;
  p.pitch.damping = 0.0;
  p.heave_pitch_coupling = 0.0;
  const double m = p.heave.inertia, k = p.heave.stiffness, mu = p.heave.cubic_frac;
  const double dt = p.heave.natural_period() / 200.0;

  const double z0 = 0.2;
  const auto rec = integrate(zero_field(), p, 0.0, dt, 10000, {z0, 0, 0, 0, 0, 0});
  auto energy = [&](double z, double zr) {
    return 0.5 * m * zr * zr + 0.5 * k * z * z + 0.25 * k * mu * z * z * z * z;
  };
  const double e0 = energy(z0, 0.0);
  for (std::size_t i = 0; i < rec.size(); i += 100)
    CHECK(energy(rec.heave[i], rec.heave_rate[i]) ==
          doctest::Approx(e0).epsilon(1e-6));
}

TEST_CASE("integrate: linear regime matches the analytic transfer function") {
  VesselParams p = catamaran_2dof_preset();
  p.heave.cubic_frac = 0.0;
  p.pitch.cubic_frac = 0.0;
  p.heave_pitch_coupling = 0.0;
  p.heave.c_velocity = 0.0;
  p.heave.probes = {{0.0, 0.0, 1.0}};

  const double amp = 0.1, omega = 3.5, eps = 0.7;
  const auto f = single_wave(amp, omega, eps, 100.0);
  const double f0 = p.heave.c_elevation * amp;
  const double m = p.heave.inertia, k = p.heave.stiffness, b = p.heave.damping;
  const double analytic_amp =
      f0 / std::sqrt(std::pow(k - m * omega * omega, 2) + std::pow(b * omega, 2));
  const double phase_lag = std::atan2(b * omega, k - m * omega * omega);

  const double dt = 0.01;
  const std::size_t steps = 20000;  // 200 s, transient fully decayed
  const auto rec = integrate(f, p, 0.0, dt, steps);
  double max_err = 0.0, max_amp = 0.0;
  for (std::size_t i = steps - 2000; i < steps; ++i) {
    const double t = dt * static_cast<double>(i);
    const double z_ref = analytic_amp * std::cos(omega * t - eps - phase_lag);
    max_err = std::max(max_err, std::abs(rec.heave[i] - z_ref));
    max_amp = std::max(max_amp, std::abs(rec.heave[i]));
  }
  CHECK(max_amp == doctest::Approx(analytic_amp).epsilon(0.01));
  CHECK(max_err <= 0.01 * analytic_amp);  // amplitude and phase jointly
}

TEST_CASE("integrate: determinism and boundedness on the presets") {
  const auto sea = sea_state_from_peak(10.66, 13.4, 3000.0, std::numbers::pi / 6);
  const auto f = irregular_field(sea, 77);
  const auto p = dtmb_3dof_preset();
  const auto a = integrate(f, p, 0.0, p.dt, 3000);
  const auto b = integrate(f, p, 0.0, p.dt, 3000);
  CHECK(a.heave == b.heave);
  CHECK(a.pitch == b.pitch);
  CHECK(a.roll == b.roll);

  double peak = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    peak = std::max({peak, std::abs(a.heave[i]), std::abs(a.pitch[i]),
                     std::abs(a.roll[i])});
  CHECK(peak < 100.0);
  CHECK(peak > 0.0);
}

TEST_CASE("integrate: head seas produce exactly zero roll") {
  const auto sea = sea_state_from_peak(10.66, 13.4, 3000.0, 0.0);
  const auto f = irregular_field(sea, 5);
  const auto rec = integrate(f, dtmb_3dof_preset(), 0.0, 0.2, 2000);
  double max_roll = 0.0;
  for (double r : rec.roll) max_roll = std::max(max_roll, std::abs(r));
  CHECK(max_roll == 0.0);
}

TEST_CASE("integrate: configuration checks") {
  const auto f = zero_field();
  const auto p = catamaran_2dof_preset();
  CHECK_THROWS_AS(integrate(f, p, 0.0, 1.0, 10), ConfigError);   // dt too coarse
  CHECK_THROWS_AS(integrate(f, p, 0.0, -0.1, 10), ConfigError);

  VesselParams bad = p;
  bad.heave.probes.clear();
  CHECK_THROWS_AS(integrate(f, bad, 0.0, p.dt, 10), ConfigError);
  VesselParams neg = p;
  neg.heave.damping = -1.0;
  CHECK_THROWS_AS(integrate(f, neg, 0.0, p.dt, 10), ConfigError);
}

TEST_CASE("presets: sampling steps resolve the fastest mode") {
  const auto cat = catamaran_2dof_preset();
  CHECK(cat.dt == 0.0625);
  CHECK(cat.dt <= cat.min_natural_period() / 20.0);
  CHECK(cat.roll_locked);
  CHECK(cat.active_dofs() == 2);

  const auto dtmb = dtmb_3dof_preset();
  CHECK(dtmb.dt == 0.2);
  CHECK(dtmb.dt <= dtmb.min_natural_period() / 20.0);
  CHECK(dtmb.active_dofs() == 3);
  CHECK(dtmb.roll.quad_damping > 0.0);

  CHECK(vessel_preset("catamaran-2dof").name == "catamaran-2dof");
  CHECK_THROWS_AS(vessel_preset("nonesuch"), ConfigError);
}
