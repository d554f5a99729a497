#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "wavemotion/errors.hpp"
#include "wavemotion/sea_kinematics.hpp"

namespace wavemotion {

/// Excitation sampling point along the hull with its contribution weight.
struct ExcitationProbe {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
};

/// Single degree of freedom of the forced-oscillator model:
///   inertia*x'' + damping*x' + quad_damping*x'|x'| +
///   stiffness*x*(1 + cubic_frac*x^2) = generalized force.
struct DofParams {
  double inertia = 1.0;
  double stiffness = 1.0;
  double damping = 0.0;
  double quad_damping = 0.0;
  double cubic_frac = 0.0;
  double c_elevation = 0.0;  ///< force per meter of elevation
  double c_velocity = 0.0;   ///< force per m/s of vertical particle velocity
  double c_acceleration = 0.0;
  std::vector<ExcitationProbe> probes;

  double natural_period() const {
    return kTwoPi * std::sqrt(inertia / stiffness);
  }
};

/// Desk-scale stand-in for a viscous-flow seakeeping solver: three weakly
/// coupled nonlinear oscillators (heave, pitch, roll) forced by wave
/// kinematics sampled at the mean free surface. Makes no claim of
/// hydrodynamic fidelity; it exists to give the surrogates a documented,
/// reproducible nonlinear ground truth.
struct VesselParams {
  std::string name;
  DofParams heave, pitch, roll;
  double heave_pitch_coupling = 0.0;  ///< symmetric cross-stiffness term
  bool roll_locked = false;
  double dt = 0.0625;  ///< recommended sampling step [s]

  void validate() const {
    for (const DofParams* d : {&heave, &pitch}) {
      if (!(d->inertia > 0.0) || !(d->stiffness > 0.0))
        throw ConfigError("vessel: inertia and stiffness must be positive");
      if (d->damping < 0.0 || d->quad_damping < 0.0)
        throw ConfigError("vessel: damping must be nonnegative");
      if (d->probes.empty())
        throw ConfigError("vessel: every active DOF needs at least one probe");
    }
    if (!roll_locked) {
      if (!(roll.inertia > 0.0) || !(roll.stiffness > 0.0))
        throw ConfigError("vessel: roll inertia and stiffness must be positive");
      if (roll.probes.empty())
        throw ConfigError("vessel: roll needs at least one probe");
    }
  }

  std::size_t active_dofs() const { return roll_locked ? 2 : 3; }

  double min_natural_period() const {
    double t = std::min(heave.natural_period(), pitch.natural_period());
    if (!roll_locked) t = std::min(t, roll.natural_period());
    return t;
  }
};

/// Vessel motion time series on a uniform grid.
struct MotionRecord {
  double dt = 0.0;
  double start_time = 0.0;
  std::vector<double> heave, pitch, roll;           ///< [m], [rad], [rad]
  std::vector<double> heave_rate, pitch_rate, roll_rate;

  std::size_t size() const { return heave.size(); }
};

/// Generalized wave forces (F_z, M_theta, M_phi) at time t: per DOF, the
/// probe-weighted sum of elevation, vertical velocity, and vertical
/// acceleration contributions at the mean surface. Head seas (beta = 0)
/// excite no roll because roll probes are laid out port/starboard
/// antisymmetric and the field is transverse-invariant.
inline std::array<double, 3> excitation(const WaveField& field,
                                        const VesselParams& params, double t) {
  auto force = [&](const DofParams& dof) {
    double f = 0.0;
    for (const auto& p : dof.probes) {
      const double x1 = field.project(p.x, p.y);
      double contrib = 0.0;
      if (dof.c_elevation != 0.0)
        contrib += dof.c_elevation * elevation(field, x1, t);
      if (dof.c_velocity != 0.0)
        contrib += dof.c_velocity * velocity(field, x1, 0.0, t).second;
      if (dof.c_acceleration != 0.0)
        contrib += dof.c_acceleration * acceleration(field, x1, 0.0, t).second;
      f += p.weight * contrib;
    }
    return f;
  };
  return {force(params.heave), force(params.pitch),
          params.roll_locked ? 0.0 : force(params.roll)};
}

namespace detail {

using State6 = std::array<double, 6>;  // z, z', theta, theta', phi, phi'

inline State6 dynamics(const State6& s, const std::array<double, 3>& f,
                       const VesselParams& p) {
  auto restoring = [](const DofParams& d, double x) {
    return d.stiffness * x * (1.0 + d.cubic_frac * x * x);
  };
  State6 ds{};
  ds[0] = s[1];
  ds[1] = (f[0] - p.heave.damping * s[1] - restoring(p.heave, s[0]) -
           p.heave_pitch_coupling * s[2]) /
          p.heave.inertia;
  ds[2] = s[3];
  ds[3] = (f[1] - p.pitch.damping * s[3] - restoring(p.pitch, s[2]) -
           p.heave_pitch_coupling * s[0]) /
          p.pitch.inertia;
  if (!p.roll_locked) {
    ds[4] = s[5];
    ds[5] = (f[2] - p.roll.damping * s[5] -
             p.roll.quad_damping * s[5] * std::abs(s[5]) -
             restoring(p.roll, s[4])) /
            p.roll.inertia;
  }
  return ds;
}

}  // namespace detail

/// Classical fixed-step RK4 integration of the vessel model, sampled every
/// dt. Deterministic; throws when dt fails the resolution check or the state
/// leaves the finite range.
inline MotionRecord integrate(const WaveField& field, const VesselParams& params,
                              double t0, double dt, std::size_t steps,
                              const std::array<double, 6>& initial = {}) {
  params.validate();
  if (!(dt > 0.0)) throw ConfigError("integrate: dt must be positive");
  const double t_min = params.min_natural_period();
  if (dt > t_min / 20.0)
    throw ConfigError("integrate: dt too coarse; need dt <= " +
                      std::to_string(t_min / 20.0) + " s for this vessel");

  MotionRecord rec;
  rec.dt = dt;
  rec.start_time = t0;
  rec.heave.reserve(steps);
  rec.pitch.reserve(steps);
  rec.roll.reserve(steps);
  rec.heave_rate.reserve(steps);
  rec.pitch_rate.reserve(steps);
  rec.roll_rate.reserve(steps);

  detail::State6 s = initial;
  auto push = [&](const detail::State6& st) {
    rec.heave.push_back(st[0]);
    rec.heave_rate.push_back(st[1]);
    rec.pitch.push_back(st[2]);
    rec.pitch_rate.push_back(st[3]);
    rec.roll.push_back(st[4]);
    rec.roll_rate.push_back(st[5]);
  };

  auto axpy = [](const detail::State6& a, double c, const detail::State6& b) {
    detail::State6 r;
    for (int i = 0; i < 6; ++i) r[i] = a[i] + c * b[i];
    return r;
  };

  for (std::size_t step = 0; step < steps; ++step) {
    push(s);
    const double t = t0 + dt * static_cast<double>(step);
    const auto f1 = excitation(field, params, t);
    const auto fm = excitation(field, params, t + 0.5 * dt);
    const auto f2 = excitation(field, params, t + dt);
    const auto k1 = detail::dynamics(s, f1, params);
    const auto k2 = detail::dynamics(axpy(s, 0.5 * dt, k1), fm, params);
    const auto k3 = detail::dynamics(axpy(s, 0.5 * dt, k2), fm, params);
    const auto k4 = detail::dynamics(axpy(s, dt, k3), f2, params);
    for (int i = 0; i < 6; ++i)
      s[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    for (double v : s)
      if (!std::isfinite(v))
        throw NumericalError("integrate: non-finite state at step " +
                             std::to_string(step + 1));
  }
  return rec;
}

/// Built-in presets. The dt values come from the sampling rates of the two
/// study cases (0.0625 s catamaran, 0.2 s DTMB analogue).
inline VesselParams catamaran_2dof_preset() {
  VesselParams p;
  p.name = "catamaran-2dof";
  p.roll_locked = true;
  p.dt = 0.0625;
  p.heave_pitch_coupling = 800.0;

  p.heave.inertia = 1000.0;
  p.heave.stiffness = 23000.0;   // T_n ~ 1.31 s
  p.heave.damping = 1000.0;      // zeta ~ 0.10
  p.heave.cubic_frac = 2.0;      // mild at |z| ~ 0.15 m
  p.heave.c_elevation = 23000.0;
  p.heave.c_velocity = 700.0;
  p.heave.probes = {{0.0, 0.0, 0.5}, {2.0, 0.0, 0.25}, {-2.0, 0.0, 0.25}};

  p.pitch.inertia = 2000.0;
  p.pitch.stiffness = 40000.0;   // T_n ~ 1.40 s
  p.pitch.damping = 2200.0;
  p.pitch.cubic_frac = 1.0;
  p.pitch.c_elevation = 10000.0;
  p.pitch.probes = {{2.0, 0.0, 1.0}, {-2.0, 0.0, -1.0}};
  return p;
}

inline VesselParams dtmb_3dof_preset() {
  VesselParams p;
  p.name = "dtmb-3dof";
  p.roll_locked = false;
  p.dt = 0.2;
  p.heave_pitch_coupling = 4.0e4;

  p.heave.inertia = 1.0e6;
  p.heave.stiffness = 6.2e5;     // T_n ~ 8.0 s
  p.heave.damping = 2.4e5;       // zeta ~ 0.15
  p.heave.cubic_frac = 0.01;     // strong at |z| ~ 5 m
  p.heave.c_elevation = 6.2e5;
  p.heave.c_velocity = 5.0e4;
  p.heave.probes = {{0.0, 0.0, 0.6}, {30.0, 0.0, 0.2}, {-30.0, 0.0, 0.2}};

  p.pitch.inertia = 2.0e6;
  p.pitch.stiffness = 9.8e5;     // T_n ~ 9.0 s
  p.pitch.damping = 5.6e5;
  p.pitch.cubic_frac = 0.8;
  p.pitch.c_elevation = 8.0e3;
  p.pitch.probes = {{30.0, 0.0, 1.0}, {-30.0, 0.0, -1.0}};

  p.roll.inertia = 3.0e6;
  p.roll.stiffness = 8.2e5;      // T_n ~ 12.0 s
  p.roll.damping = 4.7e4;        // zeta ~ 0.015 linear; viscous term dominates
  p.roll.quad_damping = 1.2e6;
  p.roll.cubic_frac = 0.5;
  p.roll.c_elevation = 8.0e4;
  p.roll.probes = {{0.0, 5.0, 1.0}, {0.0, -5.0, -1.0}};
  return p;
}

/// Preset lookup by id; throws ConfigError for unknown names.
inline VesselParams vessel_preset(const std::string& id) {
  if (id == "catamaran-2dof") return catamaran_2dof_preset();
  if (id == "dtmb-3dof") return dtmb_3dof_preset();
  throw ConfigError("unknown vessel preset: " + id);
}

}  // namespace wavemotion
