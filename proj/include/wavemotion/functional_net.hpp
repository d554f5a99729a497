#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "wavemotion/errors.hpp"
#include "wavemotion/matrix.hpp"
#include "wavemotion/neural_core.hpp"
#include "wavemotion/rng.hpp"
#include "wavemotion/sea_kinematics.hpp"

namespace wavemotion {

/// Input signal restricted to a finite window and sampled at m+1 points.
/// Points that fall outside the window or outside the recorded span
/// contribute exactly zero (the windowing operator's zero extension).
struct WindowedSample {
  double center = 0.0;
  std::vector<double> values;  // m+1 entries
};

/// Single-hidden-layer functional approximator
///   F_d(u) = sum_i c_{d,i} * sigma( sum_j xi_{i,j} u(x_j) + theta_i )
/// acting on windowed signal samples; sigma is the logistic function.
///
/// Parameters are shared across window centers (time invariance of the
/// target dynamics); they live in one flat vector, laid out xi row-major,
/// then theta, then c row-major, so the Adam/clip/finite-difference
/// machinery from the recurrent stack applies unchanged.
struct FunctionalNetParams {
  std::size_t hidden_units = 0;  // N
  std::size_t num_samples = 0;   // m (the window carries m+1 points)
  std::size_t output_dim = 0;
  double half_width = 0.0;       // a [s]
  bool causal = true;            // window [center-2a, center] vs [center-a, center+a]
  std::vector<double> params;

  std::size_t point_count() const { return num_samples + 1; }
  std::size_t param_count() const {
    return hidden_units * point_count() + hidden_units +
           output_dim * hidden_units;
  }
  const double* xi() const { return params.data(); }
  const double* theta() const { return params.data() + hidden_units * point_count(); }
  const double* c() const { return theta() + hidden_units; }
  double* xi() { return params.data(); }
  double* theta() { return params.data() + hidden_units * point_count(); }
  double* c() { return theta() + hidden_units; }

  void validate() const {
    if (hidden_units == 0 || output_dim == 0 || !(half_width > 0.0))
      throw ConfigError("functional net: invalid shape");
    if (params.size() != param_count())
      throw ConfigError("functional net: parameter vector size mismatch");
  }

  static FunctionalNetParams create(std::size_t n_hidden, std::size_t m,
                                    std::size_t output_dim, double half_width,
                                    bool causal, std::uint64_t seed) {
    FunctionalNetParams p;
    p.hidden_units = n_hidden;
    p.num_samples = m;
    p.output_dim = output_dim;
    p.half_width = half_width;
    p.causal = causal;
    p.params.assign(p.param_count(), 0.0);
    Rng rng(seed);
    const double lim_xi = std::sqrt(6.0 / static_cast<double>(m + 1 + n_hidden));
    const double lim_c = std::sqrt(6.0 / static_cast<double>(n_hidden + output_dim));
    for (std::size_t i = 0; i < n_hidden * (m + 1); ++i)
      p.xi()[i] = rng.uniform(-lim_xi, lim_xi);
    for (std::size_t i = 0; i < n_hidden; ++i) p.theta()[i] = 0.0;
    for (std::size_t i = 0; i < output_dim * n_hidden; ++i)
      p.c()[i] = rng.uniform(-lim_c, lim_c);
    return p;
  }
};

/// Value of the series at time t by linear interpolation on its grid; zero
/// outside the recorded span.
inline double sample_series(const ProbeSeries& series, double t) {
  if (series.values.empty()) return 0.0;
  const double pos = (t - series.start_time) / series.dt;
  if (pos < 0.0 || pos > static_cast<double>(series.values.size() - 1)) return 0.0;
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= series.values.size()) return series.values.back();
  const double frac = pos - static_cast<double>(lo);
  return series.values[lo] * (1.0 - frac) + series.values[lo + 1] * frac;
}

/// Windowing operator: m+1 equally spaced samples of the series inside the
/// window of measure 2a around `center` (trailing [center-2a, center] in
/// causal mode), zero outside.
inline WindowedSample window(const ProbeSeries& series, double center,
                             double half_width, std::size_t m,
                             bool causal = false) {
  if (!(half_width > 0.0)) throw ConfigError("window: half_width must be positive");
  if (m == 0) throw ConfigError("window: m must be at least 1");
  const double lo = causal ? center - 2.0 * half_width : center - half_width;
  const double hi = causal ? center : center + half_width;
  WindowedSample s;
  s.center = center;
  s.values.resize(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    const double t = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(m);
    s.values[j] = sample_series(series, t);
  }
  return s;
}

/// F(u) for one windowed sample; returns one value per output DOF.
inline std::vector<double> functional_forward(const FunctionalNetParams& p,
                                              const WindowedSample& sample) {
  p.validate();
  if (sample.values.size() != p.point_count())
    throw ConfigError("functional_forward: sample length mismatch");
  std::vector<double> hidden(p.hidden_units);
  const std::size_t pts = p.point_count();
  for (std::size_t i = 0; i < p.hidden_units; ++i) {
    double acc = p.theta()[i];
    const double* row = p.xi() + i * pts;
    for (std::size_t j = 0; j < pts; ++j) acc += row[j] * sample.values[j];
    hidden[i] = detail::sigmoid(acc);
  }
  std::vector<double> out(p.output_dim, 0.0);
  for (std::size_t d = 0; d < p.output_dim; ++d) {
    const double* cr = p.c() + d * p.hidden_units;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.hidden_units; ++i) acc += cr[i] * hidden[i];
    out[d] = acc;
  }
  return out;
}

/// Slides the window across every grid time of the series, producing a
/// T x output_dim prediction.
inline RealMatrix predict_motion_series(const FunctionalNetParams& p,
                                        const ProbeSeries& series) {
  p.validate();
  RealMatrix out(series.values.size(), p.output_dim);
  for (std::size_t t = 0; t < series.values.size(); ++t) {
    const auto sample =
        window(series, series.time_at(t), p.half_width, p.num_samples, p.causal);
    const auto y = functional_forward(p, sample);
    std::copy(y.begin(), y.end(), out.row(t));
  }
  return out;
}

namespace detail {

/// Forward + gradient accumulation for a batch of precomputed window
/// matrices; returns the MSE and writes dL/dparams.
inline double functional_loss_and_grad(const FunctionalNetParams& p,
                                       const std::vector<RealMatrix>& windows,
                                       const std::vector<RealMatrix>& targets,
                                       std::vector<double>& grads) {
  grads.assign(p.param_count(), 0.0);
  const std::size_t pts = p.point_count();
  const std::size_t N = p.hidden_units;
  double* d_xi = grads.data();
  double* d_theta = grads.data() + N * pts;
  double* d_c = d_theta + N;

  std::size_t total = 0;
  for (const auto& tgt : targets) total += tgt.data.size();
  if (total == 0) throw ConfigError("functional training: empty targets");
  const double scale = 2.0 / static_cast<double>(total);

  double loss = 0.0;
  std::vector<double> hidden(N), dpre(N);
  for (std::size_t s = 0; s < windows.size(); ++s) {
    const RealMatrix& X = windows[s];
    const RealMatrix& Y = targets[s];
    for (std::size_t t = 0; t < X.rows; ++t) {
      const double* x = X.row(t);
      for (std::size_t i = 0; i < N; ++i) {
        double acc = p.theta()[i];
        const double* row = p.xi() + i * pts;
        for (std::size_t j = 0; j < pts; ++j) acc += row[j] * x[j];
        hidden[i] = sigmoid(acc);
        dpre[i] = 0.0;
      }
      for (std::size_t d = 0; d < p.output_dim; ++d) {
        const double* cr = p.c() + d * N;
        double y = 0.0;
        for (std::size_t i = 0; i < N; ++i) y += cr[i] * hidden[i];
        const double err = y - Y(t, d);
        loss += err * err;
        const double dy = scale * err;
        double* dcr = d_c + d * N;
        for (std::size_t i = 0; i < N; ++i) {
          dcr[i] += dy * hidden[i];
          dpre[i] += dy * cr[i] * hidden[i] * (1.0 - hidden[i]);
        }
      }
      for (std::size_t i = 0; i < N; ++i) {
        d_theta[i] += dpre[i];
        double* row = d_xi + i * pts;
        for (std::size_t j = 0; j < pts; ++j) row[j] += dpre[i] * x[j];
      }
    }
  }
  return loss / static_cast<double>(total);
}

}  // namespace detail

struct FunctionalTrainConfig {
  std::size_t hidden_units = 40;
  std::size_t num_samples = 20;   // m
  double half_width = 2.0;        // a [s]
  bool causal = true;
  double lr = 5e-3;
  std::size_t steps = 2000;
  std::uint64_t seed = 0;
};

struct FunctionalTrainResult {
  FunctionalNetParams params;
  std::vector<double> loss_curve;
};

/// Precomputes the window matrix (one row per grid time) for a series.
inline RealMatrix window_matrix(const ProbeSeries& series, double half_width,
                                std::size_t m, bool causal) {
  RealMatrix X(series.values.size(), m + 1);
  for (std::size_t t = 0; t < series.values.size(); ++t) {
    const auto s = window(series, series.time_at(t), half_width, m, causal);
    std::copy(s.values.begin(), s.values.end(), X.row(t));
  }
  return X;
}

/// Full-batch Adam on the MSE between sliding-window predictions and the
/// target motion channels. Deterministic given the seed.
inline FunctionalTrainResult train_functional(
    const std::vector<ProbeSeries>& inputs, const std::vector<RealMatrix>& targets,
    const FunctionalTrainConfig& cfg) {
  if (inputs.empty() || inputs.size() != targets.size())
    throw ConfigError("train_functional: dataset empty or misaligned");
  const std::size_t out_dim = targets.front().cols;
  for (std::size_t s = 0; s < inputs.size(); ++s)
    if (targets[s].rows != inputs[s].values.size() || targets[s].cols != out_dim)
      throw ConfigError("train_functional: target shape mismatch");

  std::vector<RealMatrix> windows;
  windows.reserve(inputs.size());
  for (const auto& series : inputs)
    windows.push_back(window_matrix(series, cfg.half_width, cfg.num_samples, cfg.causal));

  FunctionalTrainResult result;
  result.params = FunctionalNetParams::create(cfg.hidden_units, cfg.num_samples,
                                              out_dim, cfg.half_width, cfg.causal,
                                              cfg.seed);
  AdamState adam(result.params.param_count());
  AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;
  std::vector<double> grads;
  for (std::size_t step = 1; step <= cfg.steps; ++step) {
    const double loss =
        detail::functional_loss_and_grad(result.params, windows, targets, grads);
    if (!std::isfinite(loss))
      throw NumericalError("train_functional: non-finite loss at step " +
                           std::to_string(step));
    result.loss_curve.push_back(loss);
    adam_update(result.params.params, grads, adam, step, adam_cfg);
  }
  return result;
}

}  // namespace wavemotion
