#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "wavemotion/checkpoint.hpp"
#include "wavemotion/errors.hpp"
#include "wavemotion/io.hpp"
#include "wavemotion/matrix.hpp"
#include "wavemotion/neural_core.hpp"
#include "wavemotion/sea_kinematics.hpp"
#include "wavemotion/vessel_oracle.hpp"
#include "wavemotion/wave_spectra.hpp"

namespace wavemotion {

/// One aligned (probe elevations, vessel motions) pair on a common grid.
struct SequencePair {
  RealMatrix inputs;   // T x input_dim
  RealMatrix targets;  // T x output_dim
  bool is_train = true;
  double train_fraction = 1.0;  // contiguous prefix used for fitting
  std::uint64_t wave_seed = 0;

  std::size_t train_steps_available() const {
    return static_cast<std::size_t>(
        std::floor(train_fraction * static_cast<double>(inputs.rows)));
  }
};

struct Dataset {
  std::vector<SequencePair> sequences;
  double dt = 0.0;
  std::size_t input_dim = 0, output_dim = 0;
  Normalization norm;
  bool normalized = false;
  std::string preset_id;
  SeaStateParams sea;
  std::size_t spectrum_components = 200;

  std::vector<std::size_t> train_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sequences.size(); ++i)
      if (sequences[i].is_train) idx.push_back(i);
    return idx;
  }
  std::vector<std::size_t> test_indices() const {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < sequences.size(); ++i)
      if (!sequences[i].is_train) idx.push_back(i);
    return idx;
  }
};

/// Synthesizes one wave realization per seed, runs the vessel oracle on it,
/// and records aligned probe/motion series. The first `num_train` seeds
/// become training sequences, the rest are held out.
inline Dataset build_dataset(const SeaStateParams& sea, const VesselParams& vessel,
                             const std::vector<std::uint64_t>& seeds,
                             std::size_t num_train, std::size_t steps_per_sequence,
                             const std::vector<std::pair<double, double>>& probes = {{0.0, 0.0}},
                             std::size_t spectrum_components = 200) {
  if (seeds.empty()) throw ConfigError("build_dataset: need at least one seed");
  if (num_train == 0 || num_train > seeds.size())
    throw ConfigError("build_dataset: num_train out of range");
  for (std::size_t i = 0; i + 1 < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j])
        throw ConfigError("build_dataset: duplicate seed " + std::to_string(seeds[i]) +
                          " would produce identical sequences");
  vessel.validate();

  Dataset ds;
  ds.dt = vessel.dt;
  ds.input_dim = probes.size();
  ds.output_dim = vessel.active_dofs();
  ds.preset_id = vessel.name;
  ds.sea = sea;
  ds.spectrum_components = spectrum_components;

  for (std::size_t s = 0; s < seeds.size(); ++s) {
    const auto disc = discretize_spectrum(sea, spectrum_components, seeds[s]);
    const auto field = make_wave_field(sea, disc);
    const auto series = probe_series(field, probes, 0.0, vessel.dt, steps_per_sequence);
    MotionRecord rec;
    try {
      rec = integrate(field, vessel, 0.0, vessel.dt, steps_per_sequence);
    } catch (const NumericalError& e) {
      throw NumericalError(std::string(e.what()) + " (wave seed " +
                           std::to_string(seeds[s]) + ")");
    }

    SequencePair pair;
    pair.wave_seed = seeds[s];
    pair.is_train = s < num_train;
    pair.inputs = RealMatrix(steps_per_sequence, probes.size());
    for (std::size_t p = 0; p < series.size(); ++p)
      for (std::size_t t = 0; t < steps_per_sequence; ++t)
        pair.inputs(t, p) = series[p].values[t];
    pair.targets = RealMatrix(steps_per_sequence, ds.output_dim);
    for (std::size_t t = 0; t < steps_per_sequence; ++t) {
      pair.targets(t, 0) = rec.heave[t];
      pair.targets(t, 1) = rec.pitch[t];
      if (ds.output_dim > 2) pair.targets(t, 2) = rec.roll[t];
    }
    ds.sequences.push_back(std::move(pair));
  }
  return ds;
}

namespace detail {

inline void apply_affine(RealMatrix& m, const std::vector<double>& mean,
                         const std::vector<double>& scale, bool forward) {
  for (std::size_t t = 0; t < m.rows; ++t)
    for (std::size_t c = 0; c < m.cols; ++c)
      m(t, c) = forward ? (m(t, c) - mean[c]) / scale[c]
                        : m(t, c) * scale[c] + mean[c];
}

}  // namespace detail

/// Fits per-channel mean/std on the training prefixes and maps every
/// sequence to unit scale. Throws for zero-variance channels, naming them.
inline void normalize(Dataset& ds) {
  if (ds.normalized) return;
  const auto train = ds.train_indices();
  if (train.empty()) throw ConfigError("normalize: train split is empty");

  auto fit = [&](bool inputs) {
    const std::size_t dim = inputs ? ds.input_dim : ds.output_dim;
    std::vector<double> mean(dim, 0.0), scale(dim, 0.0);
    std::size_t count = 0;
    for (std::size_t i : train) {
      const RealMatrix& m = inputs ? ds.sequences[i].inputs : ds.sequences[i].targets;
      const std::size_t rows = ds.sequences[i].train_steps_available();
      for (std::size_t t = 0; t < rows; ++t)
        for (std::size_t c = 0; c < dim; ++c) mean[c] += m(t, c);
      count += rows;
    }
    for (double& v : mean) v /= static_cast<double>(count);
    for (std::size_t i : train) {
      const RealMatrix& m = inputs ? ds.sequences[i].inputs : ds.sequences[i].targets;
      const std::size_t rows = ds.sequences[i].train_steps_available();
      for (std::size_t t = 0; t < rows; ++t)
        for (std::size_t c = 0; c < dim; ++c) {
          const double d = m(t, c) - mean[c];
          scale[c] += d * d;
        }
    }
    for (std::size_t c = 0; c < dim; ++c) {
      scale[c] = std::sqrt(scale[c] / static_cast<double>(count));
      if (!(scale[c] > 0.0))
        throw ConfigError(std::string("normalize: zero-variance ") +
                          (inputs ? "input" : "output") + " channel " +
                          std::to_string(c));
    }
    return std::pair{mean, scale};
  };

  std::tie(ds.norm.in_mean, ds.norm.in_scale) = fit(true);
  std::tie(ds.norm.out_mean, ds.norm.out_scale) = fit(false);
  for (auto& seq : ds.sequences) {
    detail::apply_affine(seq.inputs, ds.norm.in_mean, ds.norm.in_scale, true);
    detail::apply_affine(seq.targets, ds.norm.out_mean, ds.norm.out_scale, true);
  }
  ds.normalized = true;
}

struct SurrogateTrainConfig {
  CellKind cell_kind = CellKind::lstm;
  std::size_t layers = 1;
  std::size_t neurons = 32;
  std::size_t train_steps = 2000;
  double lr = 3e-3;
  double final_lr = -1.0;  // < 0: constant lr; otherwise cosine decay to this
  double clip_norm = 1.0;
  std::size_t tbptt_len = 64;  // 0 = full-sequence BPTT
  std::uint64_t seed = 0;
  std::size_t loss_every = 50;
};

struct SurrogateTrainResult {
  Checkpoint checkpoint;
  std::vector<double> loss_curve;  // sampled every `loss_every` steps
  double final_train_mse = 0.0;
  double wall_seconds = 0.0;
};

/// Truncated-BPTT training: each optimizer step consumes the next window of
/// every training sequence, with hidden state carried across windows inside
/// a sequence and reset at sequence end. Deterministic per seed.
inline SurrogateTrainResult train_surrogate(const Dataset& ds,
                                            const SurrogateTrainConfig& cfg) {
  if (!ds.normalized) throw ConfigError("train_surrogate: dataset must be normalized");
  const auto train = ds.train_indices();
  if (train.empty()) throw ConfigError("train_surrogate: no training sequences");

  const auto t_start = std::chrono::steady_clock::now();
  RecurrentStack stack(cfg.cell_kind, ds.input_dim,
                       std::vector<std::size_t>(cfg.layers, cfg.neurons),
                       ds.output_dim);
  stack.initialize(cfg.seed);

  struct Cursor {
    std::size_t pos = 0;
    CellState state;
  };
  std::vector<Cursor> cursors(train.size());
  for (auto& c : cursors) c.state = stack.zero_state();

  AdamState adam(stack.params().size());
  AdamConfig adam_cfg;
  adam_cfg.lr = cfg.lr;

  SurrogateTrainResult result;
  double last_loss = 0.0;
  for (std::size_t step = 1; step <= cfg.train_steps; ++step) {
    std::vector<double> grads(stack.params().size(), 0.0);
    double loss = 0.0;
    for (std::size_t s = 0; s < train.size(); ++s) {
      const SequencePair& seq = ds.sequences[train[s]];
      const std::size_t avail = seq.train_steps_available();
      if (avail < 2) throw ConfigError("train_surrogate: training prefix too short");
      const std::size_t window =
          cfg.tbptt_len == 0 ? avail : std::min(cfg.tbptt_len, avail);
      Cursor& cur = cursors[s];
      if (cur.pos + window > avail) {  // wrap: restart the sequence
        cur.pos = 0;
        cur.state = stack.zero_state();
      }
      RealMatrix in(window, ds.input_dim), tgt(window, ds.output_dim);
      for (std::size_t t = 0; t < window; ++t) {
        std::copy(seq.inputs.row(cur.pos + t), seq.inputs.row(cur.pos + t) + ds.input_dim,
                  in.row(t));
        std::copy(seq.targets.row(cur.pos + t),
                  seq.targets.row(cur.pos + t) + ds.output_dim, tgt.row(t));
      }
      ForwardTape tape;
      CellState final_state;
      const RealMatrix out = stack.forward_sequence(in, cur.state, &final_state, &tape);
      loss += mse(out, tgt);
      const RealMatrix dy = mse_gradient(out, tgt);
      const auto g = stack.backward_bptt(tape, dy);
      for (std::size_t i = 0; i < grads.size(); ++i) grads[i] += g[i];
      cur.pos += window;
      cur.state = std::move(final_state);  // carried, gradient-detached
    }
    const double inv = 1.0 / static_cast<double>(train.size());
    for (double& g : grads) g *= inv;
    loss *= inv;
    if (!std::isfinite(loss))
      throw NumericalError("train_surrogate: non-finite loss at step " +
                           std::to_string(step));
    if (cfg.clip_norm > 0.0) clip_gradients(grads, cfg.clip_norm);
    if (cfg.final_lr >= 0.0) {
      const double frac = static_cast<double>(step - 1) /
                          static_cast<double>(std::max<std::size_t>(cfg.train_steps - 1, 1));
      adam_cfg.lr = cfg.final_lr +
                    0.5 * (cfg.lr - cfg.final_lr) * (1.0 + std::cos(std::numbers::pi * frac));
    }
    adam_update(stack.params(), grads, adam, step, adam_cfg);
    stack.bump_revision();
    last_loss = loss;
    if (cfg.loss_every && (step % cfg.loss_every == 0 || step == cfg.train_steps))
      result.loss_curve.push_back(loss);
  }

  result.final_train_mse = last_loss;
  result.checkpoint.model_kind = cell_kind_name(cfg.cell_kind);
  result.checkpoint.stack = std::move(stack);
  result.checkpoint.norm = ds.norm;
  result.checkpoint.dt = ds.dt;
  result.checkpoint.metadata = {
      {"cell_kind", cell_kind_name(cfg.cell_kind)},
      {"layers", cfg.layers},
      {"neurons", cfg.neurons},
      {"train_steps", cfg.train_steps},
      {"lr", cfg.lr},
      {"clip_norm", cfg.clip_norm},
      {"tbptt_len", cfg.tbptt_len},
      {"seed", cfg.seed},
      {"final_train_mse", result.final_train_mse},
      {"preset", ds.preset_id}};
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

/// Free-running prediction over raw (unnormalized) probe inputs from zero
/// initial state; outputs are denormalized to physical units.
inline RealMatrix predict(const Checkpoint& ck, const RealMatrix& raw_inputs) {
  if (ck.is_functional())
    throw ConfigError("predict: functional checkpoints use predict_functional");
  if (raw_inputs.cols != ck.stack.input_dim())
    throw ConfigError("predict: input width does not match checkpoint");
  RealMatrix in = raw_inputs;
  detail::apply_affine(in, ck.norm.in_mean, ck.norm.in_scale, true);
  RealMatrix out = ck.stack.forward_sequence(in, ck.stack.zero_state());
  detail::apply_affine(out, ck.norm.out_mean, ck.norm.out_scale, false);
  return out;
}

/// Same contract as predict() for a functional-net checkpoint; the input
/// must be a single probe channel.
inline RealMatrix predict_functional(const Checkpoint& ck, const RealMatrix& raw_inputs) {
  if (!ck.is_functional())
    throw ConfigError("predict_functional: checkpoint is not a functional net");
  if (raw_inputs.cols != 1)
    throw ConfigError("predict_functional: functional nets take one probe channel");
  RealMatrix in = raw_inputs;
  detail::apply_affine(in, ck.norm.in_mean, ck.norm.in_scale, true);
  ProbeSeries series;
  series.dt = ck.dt;
  series.values.assign(in.data.begin(), in.data.end());
  RealMatrix out = predict_motion_series(ck.functional, series);
  detail::apply_affine(out, ck.norm.out_mean, ck.norm.out_scale, false);
  return out;
}

inline RealMatrix predict_any(const Checkpoint& ck, const RealMatrix& raw_inputs) {
  return ck.is_functional() ? predict_functional(ck, raw_inputs)
                            : predict(ck, raw_inputs);
}

/// Trains a functional net on the normalized training prefixes and wraps it
/// in the same checkpoint format as the recurrent surrogates.
inline SurrogateTrainResult train_functional_surrogate(const Dataset& ds,
                                                       const FunctionalTrainConfig& cfg) {
  if (!ds.normalized)
    throw ConfigError("train_functional_surrogate: dataset must be normalized");
  if (ds.input_dim != 1)
    throw ConfigError("train_functional_surrogate: functional nets take one probe channel");
  const auto train = ds.train_indices();
  if (train.empty()) throw ConfigError("train_functional_surrogate: no training sequences");

  const auto t_start = std::chrono::steady_clock::now();
  std::vector<ProbeSeries> inputs;
  std::vector<RealMatrix> targets;
  for (std::size_t i : train) {
    const SequencePair& seq = ds.sequences[i];
    const std::size_t avail = seq.train_steps_available();
    if (avail < 2)
      throw ConfigError("train_functional_surrogate: training prefix too short");
    ProbeSeries series;
    series.dt = ds.dt;
    series.values.assign(seq.inputs.data.begin(), seq.inputs.data.begin() + avail);
    inputs.push_back(std::move(series));
    RealMatrix tgt(avail, ds.output_dim);
    std::copy(seq.targets.data.begin(), seq.targets.data.begin() + avail * ds.output_dim,
              tgt.data.begin());
    targets.push_back(std::move(tgt));
  }
  const auto trained = train_functional(inputs, targets, cfg);

  SurrogateTrainResult result;
  result.loss_curve = trained.loss_curve;
  result.final_train_mse = trained.loss_curve.back();
  result.checkpoint.model_kind = "functional";
  result.checkpoint.functional = trained.params;
  result.checkpoint.norm = ds.norm;
  result.checkpoint.dt = ds.dt;
  result.checkpoint.metadata = {{"model", "functional"},
                                {"hidden_units", cfg.hidden_units},
                                {"num_samples", cfg.num_samples},
                                {"half_width", cfg.half_width},
                                {"causal", cfg.causal},
                                {"train_steps", cfg.steps},
                                {"lr", cfg.lr},
                                {"seed", cfg.seed},
                                {"final_train_mse", result.final_train_mse},
                                {"preset", ds.preset_id}};
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return result;
}

/// Relative squared error: sum (Y - Yhat)^2 / sum (Yhat - mean(Yhat))^2,
/// with Yhat the reference series.
inline double rse(const std::vector<double>& predicted,
                  const std::vector<double>& reference) {
  if (predicted.size() != reference.size() || predicted.size() < 2)
    throw ConfigError("rse: need equal lengths >= 2");
  double mean = 0.0;
  for (double v : reference) mean += v;
  mean /= static_cast<double>(reference.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double e = predicted[i] - reference[i];
    num += e * e;
    const double d = reference[i] - mean;
    den += d * d;
  }
  if (!(den > 0.0)) throw ConfigError("rse: reference series is constant");
  return num / den;
}

/// Per-sequence, per-DOF RSE plus the two aggregate conventions. The mean
/// over all (sequence, DOF) entries is the default overall score; the sum
/// is reported alongside it.
struct EvalResult {
  std::vector<std::vector<double>> per_sequence_dof_rse;  // [seq][dof]
  std::vector<double> per_dof_rse;  // averaged over sequences
  double overall_mean = 0.0;
  double overall_sum = 0.0;
};

inline EvalResult evaluate(const Checkpoint& ck, const Dataset& ds, bool test_split) {
  const auto idx = test_split ? ds.test_indices() : ds.train_indices();
  if (idx.empty()) throw ConfigError("evaluate: requested split is empty");

  EvalResult r;
  r.per_dof_rse.assign(ds.output_dim, 0.0);
  for (std::size_t i : idx) {
    const SequencePair& seq = ds.sequences[i];
    RealMatrix raw_in = seq.inputs;
    RealMatrix raw_tgt = seq.targets;
    if (ds.normalized) {
      detail::apply_affine(raw_in, ds.norm.in_mean, ds.norm.in_scale, false);
      detail::apply_affine(raw_tgt, ds.norm.out_mean, ds.norm.out_scale, false);
    }
    const RealMatrix pred = predict_any(ck, raw_in);
    std::vector<double> row;
    for (std::size_t d = 0; d < ds.output_dim; ++d) {
      std::vector<double> p(pred.rows), t(pred.rows);
      for (std::size_t k = 0; k < pred.rows; ++k) {
        p[k] = pred(k, d);
        t[k] = raw_tgt(k, d);
      }
      const double e = rse(p, t);
      row.push_back(e);
      r.per_dof_rse[d] += e;
      r.overall_sum += e;
    }
    r.per_sequence_dof_rse.push_back(std::move(row));
  }
  for (double& v : r.per_dof_rse) v /= static_cast<double>(idx.size());
  r.overall_mean =
      r.overall_sum / static_cast<double>(idx.size() * ds.output_dim);
  return r;
}

/// One grid point of the architecture sweep.
struct SweepRow {
  CellKind cell_kind = CellKind::lstm;
  std::size_t layers = 1, neurons = 15, train_steps = 2000, num_sequences = 0;
  double train_fraction = 1.0;
  bool failed = false;
  std::string error;
  EvalResult eval;
  double train_mse = 0.0;
  double wall_seconds = 0.0;

  std::string key() const {
    std::ostringstream os;
    os << cell_kind_name(cell_kind) << ':' << layers << ':' << neurons << ':'
       << train_steps << ':' << num_sequences << ':' << train_fraction;
    return os.str();
  }
};

struct SweepGrid {
  std::vector<CellKind> cell_kinds{CellKind::lstm};
  std::vector<std::size_t> layers{1};
  std::vector<std::size_t> neurons{15};
  std::vector<std::size_t> train_steps{2000};
  std::vector<std::size_t> num_sequences{0};  // 0 = all available
  std::vector<double> train_fractions{1.0};
  double lr = 3e-3;
  double final_lr = -1.0;
  double clip_norm = 1.0;
  std::size_t tbptt_len = 64;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sorted by overall test RSE, failures last

  std::string to_csv() const {
    std::ostringstream os;
    os.precision(10);
    os << "cell_kind,layers,neurons,train_steps,num_sequences,train_fraction,"
          "overall_rse_mean,overall_rse_sum,train_mse,wall_seconds,status\n";
    for (const auto& r : rows) {
      os << cell_kind_name(r.cell_kind) << ',' << r.layers << ',' << r.neurons
         << ',' << r.train_steps << ',' << r.num_sequences << ','
         << r.train_fraction << ',';
      if (r.failed)
        os << "nan,nan,nan," << r.wall_seconds << ",failed:" << r.error << '\n';
      else
        os << r.eval.overall_mean << ',' << r.eval.overall_sum << ','
           << r.train_mse << ',' << r.wall_seconds << ",ok\n";
    }
    return os.str();
  }
};

/// Restricts a dataset to the first `num_sequences` training sequences (0 =
/// all) and applies the training fraction, then (re)fits normalization on
/// the restricted split. Test sequences are kept as-is.
inline Dataset restrict_dataset(const Dataset& full, std::size_t num_sequences,
                                double train_fraction) {
  if (full.normalized)
    throw ConfigError("restrict_dataset: pass the raw (unnormalized) dataset");
  Dataset ds = full;
  std::size_t kept = 0;
  std::vector<SequencePair> seqs;
  for (const auto& seq : ds.sequences) {
    if (seq.is_train) {
      if (num_sequences != 0 && kept >= num_sequences) continue;
      ++kept;
      SequencePair s = seq;
      s.train_fraction = train_fraction;
      seqs.push_back(std::move(s));
    } else {
      seqs.push_back(seq);
    }
  }
  ds.sequences = std::move(seqs);
  normalize(ds);
  return ds;
}

/// Trains and evaluates every grid combination. Deterministic per seed;
/// individual failures are recorded and the sweep continues. Rows already
/// present in `resume_keys` are skipped by the CLI driver.
inline SweepReport architecture_sweep(const Dataset& raw_dataset, const SweepGrid& grid,
                                      std::uint64_t seed, std::size_t threads = 1,
                                      const std::vector<std::string>& resume_keys = {}) {
  std::vector<SweepRow> todo;
  for (CellKind kind : grid.cell_kinds)
    for (std::size_t l : grid.layers)
      for (std::size_t n : grid.neurons)
        for (std::size_t ts : grid.train_steps)
          for (std::size_t ns : grid.num_sequences)
            for (double fr : grid.train_fractions) {
              SweepRow row;
              row.cell_kind = kind;
              row.layers = l;
              row.neurons = n;
              row.train_steps = ts;
              row.num_sequences = ns;
              row.train_fraction = fr;
              if (std::find(resume_keys.begin(), resume_keys.end(), row.key()) ==
                  resume_keys.end())
                todo.push_back(row);
            }
  if (todo.empty() && resume_keys.empty())
    throw ConfigError("architecture_sweep: empty grid");

  auto run_row = [&](SweepRow& row, std::size_t ordinal) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Dataset ds = restrict_dataset(raw_dataset, row.num_sequences, row.train_fraction);
      SurrogateTrainConfig cfg;
      cfg.cell_kind = row.cell_kind;
      cfg.layers = row.layers;
      cfg.neurons = row.neurons;
      cfg.train_steps = row.train_steps;
      cfg.lr = grid.lr;
      cfg.final_lr = grid.final_lr;
      cfg.clip_norm = grid.clip_norm;
      cfg.tbptt_len = grid.tbptt_len;
      cfg.seed = Rng(seed).split(ordinal + 1).next_u64();
      auto trained = train_surrogate(ds, cfg);
      row.train_mse = trained.final_train_mse;
      row.eval = evaluate(trained.checkpoint, ds, /*test_split=*/true);
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < todo.size(); ++i) run_row(todo[i], i);
  } else {
    std::mutex mtx;
    std::size_t next = 0;
    auto worker = [&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lock(mtx);
          if (next >= todo.size()) return;
          i = next++;
        }
        run_row(todo[i], i);
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < std::min(threads, todo.size()); ++i)
      pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepReport report;
  report.rows = std::move(todo);
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) {
                     if (a.failed != b.failed) return !a.failed;
                     return a.eval.overall_mean < b.eval.overall_mean;
                   });
  return report;
}

}  // namespace wavemotion
