// wavemotion: irregular-sea synthesis, a nonlinear vessel oracle, and
// learned surrogate models, driven by a JSON run config.
//
// Exit codes: 0 ok, 2 config, 3 I/O, 4 missing dependency, 5 numerical.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wavemotion/dataset_io.hpp"
#include "wavemotion/training_harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wavemotion;

namespace {

struct GlobalOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::size_t threads = 1;
};

void reject_unknown_keys(const json& obj, const std::string& block,
                         const std::set<std::string>& allowed) {
  if (!obj.is_object())
    throw ConfigError("config block '" + block + "' must be a JSON object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key))
      throw ConfigError("unknown config key '" + block + "." + key + "'");
}

json load_config(const GlobalOpts& g) {
  if (g.config_path.empty()) throw ConfigError("--config is required");
  json cfg;
  try {
    cfg = json::parse(read_file(g.config_path));
  } catch (const json::exception& e) {
    throw ConfigError("config " + g.config_path + ": " + e.what());
  }
  reject_unknown_keys(cfg, "config",
                      {"seed", "sea_state", "discretization", "vessel_preset",
                       "waves", "oracle", "dataset", "training", "sweep", "io"});
  return cfg;
}

std::uint64_t effective_seed(const GlobalOpts& g, const json& cfg) {
  if (g.seed_set) return g.seed;
  return cfg.value("seed", std::uint64_t{0});
}

double get_number(const json& block, const std::string& block_name,
                  const std::string& key) {
  if (!block.contains(key))
    throw ConfigError("missing config field '" + block_name + "." + key + "'");
  if (!block[key].is_number())
    throw ConfigError("config field '" + block_name + "." + key +
                      "' must be a number");
  return block[key].get<double>();
}

SeaStateParams parse_sea_state(const json& cfg) {
  if (!cfg.contains("sea_state"))
    throw ConfigError("missing config block 'sea_state'");
  const json& s = cfg["sea_state"];
  reject_unknown_keys(s, "sea_state",
                      {"hs", "tp", "t1", "depth", "heading_deg", "gravity"});
  const double hs = get_number(s, "sea_state", "hs");
  const double depth = get_number(s, "sea_state", "depth");
  const double heading =
      s.value("heading_deg", 0.0) * std::numbers::pi / 180.0;
  const double gravity = s.value("gravity", 9.81);
  if (s.contains("tp") == s.contains("t1"))
    throw ConfigError("sea_state needs exactly one of 'tp' or 't1'");
  const auto sea =
      s.contains("tp")
          ? sea_state_from_peak(hs, get_number(s, "sea_state", "tp"), depth,
                                heading, gravity)
          : sea_state_from_mean(hs, get_number(s, "sea_state", "t1"), depth,
                                heading, gravity);
  sea.validate();
  return sea;
}

struct DiscretizationOpts {
  std::size_t components = 200;
  double coverage = 0.999;
};

DiscretizationOpts parse_discretization(const json& cfg) {
  DiscretizationOpts d;
  if (!cfg.contains("discretization")) return d;
  const json& b = cfg["discretization"];
  reject_unknown_keys(b, "discretization", {"components", "coverage"});
  d.components = b.value("components", std::size_t{200});
  d.coverage = b.value("coverage", 0.999);
  if (d.components == 0) throw ConfigError("discretization.components must be positive");
  return d;
}

VesselParams parse_vessel(const json& cfg) {
  if (!cfg.contains("vessel_preset"))
    throw ConfigError("missing config field 'vessel_preset'");
  return vessel_preset(cfg["vessel_preset"].get<std::string>());
}

std::vector<std::pair<double, double>> parse_probes(const json& block,
                                                    const std::string& name) {
  std::vector<std::pair<double, double>> probes{{0.0, 0.0}};
  if (!block.contains("probes")) return probes;
  probes.clear();
  for (const auto& p : block["probes"]) {
    if (!p.is_array() || p.size() != 2)
      throw ConfigError(name + ".probes entries must be [x, y] pairs");
    probes.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  if (probes.empty()) throw ConfigError(name + ".probes must not be empty");
  return probes;
}

/// Every command drops the fully resolved configuration next to its outputs
/// so a run can be replayed byte-for-byte.
void echo_resolved_config(const GlobalOpts& g, const json& cfg,
                          const std::string& command, std::uint64_t seed) {
  json resolved = cfg;
  resolved["seed"] = seed;
  json run;
  run["command"] = command;
  run["out_dir"] = g.out_dir;
  run["threads"] = g.threads;
  run["config"] = resolved;
  atomic_write(fs::path(g.out_dir) / "resolved_config.json", run.dump(2) + "\n");
}

std::string motion_csv(const MotionRecord& rec, const std::vector<double>& elev,
                       std::size_t dofs) {
  std::vector<double> time(rec.size());
  for (std::size_t i = 0; i < time.size(); ++i)
    time[i] = rec.start_time + rec.dt * static_cast<double>(i);
  std::vector<std::string> header{"time", "elevation", "heave", "pitch"};
  std::vector<const std::vector<double>*> cols{&time, &elev, &rec.heave, &rec.pitch};
  if (dofs > 2) {
    header.push_back("roll");
    cols.push_back(&rec.roll);
  }
  return csv_table(header, cols);
}

// ---- commands -------------------------------------------------------------

int cmd_spectrum(const GlobalOpts& g) {
  const json cfg = load_config(g);
  const auto sea = parse_sea_state(cfg);
  const auto disc = parse_discretization(cfg);
  const std::uint64_t seed = effective_seed(g, cfg);

  const auto [w_lo, w_hi] = default_frequency_band(sea, disc.coverage);
  const std::size_t n = 400;
  std::vector<double> omega(n), density(n), cumulative(n);
  const double m0 = spectral_m0(sea);
  for (std::size_t i = 0; i < n; ++i) {
    omega[i] = 0.5 * w_lo + (1.5 * w_hi - 0.5 * w_lo) *
                                static_cast<double>(i) / static_cast<double>(n - 1);
    density[i] = pm_spectral_density(omega[i], sea);
    cumulative[i] = m0 * spectral_energy_fraction_below(omega[i], sea);
  }
  atomic_write(fs::path(g.out_dir) / "spectrum.csv",
               csv_table({"omega", "spectral_density", "cumulative_energy"},
                         {&omega, &density, &cumulative}));
  echo_resolved_config(g, cfg, "spectrum", seed);
  std::cout << "spectrum.csv written (m0 = " << m0 << " m^2)\n";
  return 0;
}

int cmd_waves(const GlobalOpts& g) {
  const json cfg = load_config(g);
  const auto sea = parse_sea_state(cfg);
  const auto disc = parse_discretization(cfg);
  const std::uint64_t seed = effective_seed(g, cfg);
  if (!cfg.contains("waves")) throw ConfigError("missing config block 'waves'");
  const json& w = cfg["waves"];
  reject_unknown_keys(w, "waves", {"steps", "dt", "start_time", "probes"});
  const auto steps = static_cast<std::size_t>(get_number(w, "waves", "steps"));
  const double dt = get_number(w, "waves", "dt");
  const double t0 = w.value("start_time", 0.0);
  const auto probes = parse_probes(w, "waves");

  const auto field = make_wave_field(
      sea, discretize_spectrum(sea, disc.components, seed, disc.coverage));
  const auto series = probe_series(field, probes, t0, dt, steps);

  std::vector<double> time(steps);
  for (std::size_t i = 0; i < steps; ++i) time[i] = series[0].time_at(i);
  std::vector<std::string> header{"time"};
  std::vector<const std::vector<double>*> cols{&time};
  for (std::size_t p = 0; p < series.size(); ++p) {
    header.push_back("elevation_" + std::to_string(p));
    cols.push_back(&series[p].values);
  }
  atomic_write(fs::path(g.out_dir) / "waves.csv", csv_table(header, cols));
  echo_resolved_config(g, cfg, "waves", seed);
  std::cout << "waves.csv written (" << steps << " steps, " << series.size()
            << " probes)\n";
  return 0;
}

int cmd_oracle(const GlobalOpts& g) {
  const json cfg = load_config(g);
  const auto sea = parse_sea_state(cfg);
  const auto disc = parse_discretization(cfg);
  const auto vessel = parse_vessel(cfg);
  const std::uint64_t seed = effective_seed(g, cfg);
  if (!cfg.contains("oracle")) throw ConfigError("missing config block 'oracle'");
  const json& o = cfg["oracle"];
  reject_unknown_keys(o, "oracle", {"steps", "start_time"});
  const auto steps = static_cast<std::size_t>(get_number(o, "oracle", "steps"));
  const double t0 = o.value("start_time", 0.0);

  const auto field = make_wave_field(
      sea, discretize_spectrum(sea, disc.components, seed, disc.coverage));
  const auto rec = integrate(field, vessel, t0, vessel.dt, steps);
  std::vector<double> elev(steps);
  for (std::size_t i = 0; i < steps; ++i)
    elev[i] = elevation(field, 0.0, t0 + vessel.dt * static_cast<double>(i));

  atomic_write(fs::path(g.out_dir) / "motions.csv",
               motion_csv(rec, elev, vessel.active_dofs()));
  echo_resolved_config(g, cfg, "oracle", seed);
  std::cout << "motions.csv written (" << vessel.name << ", " << steps
            << " steps)\n";
  return 0;
}

int cmd_dataset(const GlobalOpts& g) {
  const json cfg = load_config(g);
  const auto sea = parse_sea_state(cfg);
  const auto disc = parse_discretization(cfg);
  const auto vessel = parse_vessel(cfg);
  const std::uint64_t seed = effective_seed(g, cfg);
  if (!cfg.contains("dataset")) throw ConfigError("missing config block 'dataset'");
  const json& d = cfg["dataset"];
  reject_unknown_keys(d, "dataset", {"seeds", "num_train", "steps", "probes"});
  if (!d.contains("seeds"))
    throw ConfigError("missing config field 'dataset.seeds'");
  const auto wave_seeds = d["seeds"].get<std::vector<std::uint64_t>>();
  const auto num_train =
      static_cast<std::size_t>(get_number(d, "dataset", "num_train"));
  const auto steps = static_cast<std::size_t>(get_number(d, "dataset", "steps"));
  const auto probes = parse_probes(d, "dataset");

  const auto ds = build_dataset(sea, vessel, wave_seeds, num_train, steps, probes,
                                disc.components);
  save_dataset(ds, fs::path(g.out_dir) / "dataset");
  echo_resolved_config(g, cfg, "dataset", seed);
  std::cout << "dataset written: " << ds.sequences.size() << " sequences ("
            << num_train << " train), " << steps << " steps each\n";
  return 0;
}

Dataset load_dataset_block(const json& cfg, const GlobalOpts& g) {
  fs::path dir = fs::path(g.out_dir) / "dataset";
  if (cfg.contains("io")) {
    const json& io = cfg["io"];
    reject_unknown_keys(io, "io", {"dataset_dir", "checkpoint", "input_csv"});
    if (io.contains("dataset_dir")) dir = io["dataset_dir"].get<std::string>();
  }
  if (!fs::exists(dir / "manifest.json"))
    throw MissingDependencyError("dataset not found at " + dir.string() +
                                 " (run the dataset command first)");
  return load_dataset(dir);
}

fs::path checkpoint_path(const json& cfg, const GlobalOpts& g) {
  if (cfg.contains("io") && cfg["io"].contains("checkpoint"))
    return cfg["io"]["checkpoint"].get<std::string>();
  return fs::path(g.out_dir) / "checkpoint.bin";
}

int cmd_train(const GlobalOpts& g) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  auto ds = load_dataset_block(cfg, g);
  if (!ds.normalized) normalize(ds);

  if (!cfg.contains("training")) throw ConfigError("missing config block 'training'");
  const json& t = cfg["training"];
  reject_unknown_keys(t, "training",
                      {"model", "layers", "neurons", "train_steps", "lr",
                       "clip_norm", "tbptt_len", "loss_every", "train_fraction",
                       "hidden_units", "num_samples", "half_width", "causal"});
  const std::string model = t.value("model", "lstm");

  SurrogateTrainResult result;
  if (model == "functional") {
    FunctionalTrainConfig fc;
    fc.hidden_units = t.value("hidden_units", std::size_t{40});
    fc.num_samples = t.value("num_samples", std::size_t{20});
    fc.half_width = t.value("half_width", 2.0);
    fc.causal = t.value("causal", true);
    fc.lr = t.value("lr", 5e-3);
    fc.steps = t.value("train_steps", std::size_t{2000});
    fc.seed = seed;
    result = train_functional_surrogate(ds, fc);
  } else {
    SurrogateTrainConfig sc;
    sc.cell_kind = cell_kind_from_name(model);
    sc.layers = t.value("layers", std::size_t{1});
    sc.neurons = t.value("neurons", std::size_t{32});
    sc.train_steps = t.value("train_steps", std::size_t{2000});
    sc.lr = t.value("lr", 3e-3);
    sc.clip_norm = t.value("clip_norm", 1.0);
    sc.tbptt_len = t.value("tbptt_len", std::size_t{64});
    sc.loss_every = t.value("loss_every", std::size_t{50});
    sc.seed = seed;
    result = train_surrogate(ds, sc);
  }

  save_checkpoint(result.checkpoint, checkpoint_path(cfg, g));
  std::vector<double> step_axis(result.loss_curve.size());
  for (std::size_t i = 0; i < step_axis.size(); ++i)
    step_axis[i] = static_cast<double>(i + 1);
  atomic_write(fs::path(g.out_dir) / "loss_curve.csv",
               csv_table({"sample", "train_mse"}, {&step_axis, &result.loss_curve}));
  echo_resolved_config(g, cfg, "train", seed);
  std::cout << "checkpoint written (" << model
            << ", final train MSE " << result.final_train_mse << ", "
            << result.wall_seconds << " s)\n";
  return 0;
}

int cmd_eval(const GlobalOpts& g) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  const auto ds = load_dataset_block(cfg, g);
  const auto ck_path = checkpoint_path(cfg, g);
  if (!fs::exists(ck_path))
    throw MissingDependencyError("checkpoint not found at " + ck_path.string() +
                                 " (run the train command first)");
  const auto ck = load_checkpoint(ck_path);
  const auto ev = evaluate(ck, ds, /*test_split=*/true);

  std::ostringstream out;
  out.precision(10);
  out << "sequence";
  const char* names[] = {"heave", "pitch", "roll"};
  for (std::size_t d = 0; d < ds.output_dim; ++d) out << ",rse_" << names[d];
  out << '\n';
  const auto test = ds.test_indices();
  for (std::size_t i = 0; i < test.size(); ++i) {
    out << test[i];
    for (double v : ev.per_sequence_dof_rse[i]) out << ',' << v;
    out << '\n';
  }
  out << "mean";
  for (double v : ev.per_dof_rse) out << ',' << v;
  out << '\n';
  out << "overall_mean," << ev.overall_mean << '\n';
  out << "overall_sum," << ev.overall_sum << '\n';
  atomic_write(fs::path(g.out_dir) / "eval.csv", out.str());

  // plot data: time, reference, prediction for each test sequence
  for (std::size_t i : test) {
    const SequencePair& seq = ds.sequences[i];
    RealMatrix raw_in = seq.inputs, raw_tgt = seq.targets;
    if (ds.normalized) {
      detail::apply_affine(raw_in, ds.norm.in_mean, ds.norm.in_scale, false);
      detail::apply_affine(raw_tgt, ds.norm.out_mean, ds.norm.out_scale, false);
    }
    const auto pred = predict_any(ck, raw_in);
    std::ostringstream p;
    p.precision(17);
    p << "time";
    for (std::size_t d = 0; d < ds.output_dim; ++d)
      p << ",ref_" << names[d] << ",pred_" << names[d];
    p << '\n';
    for (std::size_t r = 0; r < pred.rows; ++r) {
      p << ds.dt * static_cast<double>(r);
      for (std::size_t d = 0; d < ds.output_dim; ++d)
        p << ',' << raw_tgt(r, d) << ',' << pred(r, d);
      p << '\n';
    }
    atomic_write(fs::path(g.out_dir) / ("prediction_" + std::to_string(i) + ".csv"),
                 p.str());
  }
  echo_resolved_config(g, cfg, "eval", seed);
  std::cout << "eval.csv written (overall RSE mean " << ev.overall_mean << ")\n";
  return 0;
}

int cmd_predict(const GlobalOpts& g) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  const auto ck_path = checkpoint_path(cfg, g);
  if (!fs::exists(ck_path))
    throw MissingDependencyError("checkpoint not found at " + ck_path.string());
  const auto ck = load_checkpoint(ck_path);

  fs::path input = fs::path(g.out_dir) / "waves.csv";
  if (cfg.contains("io") && cfg["io"].contains("input_csv"))
    input = cfg["io"]["input_csv"].get<std::string>();
  if (!fs::exists(input))
    throw MissingDependencyError("input series not found at " + input.string() +
                                 " (run the waves command first)");

  std::ifstream in(input);
  std::string line;
  std::getline(in, line);  // header
  std::vector<double> time;
  std::vector<std::vector<double>> channels;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    time.push_back(std::stod(cell));
    std::size_t c = 0;
    while (std::getline(row, cell, ',')) {
      if (channels.size() <= c) channels.resize(c + 1);
      channels[c].push_back(std::stod(cell));
      ++c;
    }
  }
  if (time.empty() || channels.empty())
    throw ConfigError("input series " + input.string() + " has no data rows");
  RealMatrix inputs(time.size(), channels.size());
  for (std::size_t r = 0; r < time.size(); ++r)
    for (std::size_t c = 0; c < channels.size(); ++c)
      inputs(r, c) = channels[c][r];

  const auto pred = predict_any(ck, inputs);
  std::vector<std::string> header{"time"};
  std::vector<std::vector<double>> out_cols(pred.cols);
  std::vector<const std::vector<double>*> cols{&time};
  const char* names[] = {"heave", "pitch", "roll"};
  for (std::size_t d = 0; d < pred.cols; ++d) {
    out_cols[d].resize(pred.rows);
    for (std::size_t r = 0; r < pred.rows; ++r) out_cols[d][r] = pred(r, d);
    header.push_back(d < 3 ? names[d] : "dof_" + std::to_string(d));
    cols.push_back(&out_cols[d]);
  }
  atomic_write(fs::path(g.out_dir) / "predictions.csv", csv_table(header, cols));
  echo_resolved_config(g, cfg, "predict", seed);
  std::cout << "predictions.csv written (" << pred.rows << " steps)\n";
  return 0;
}

int cmd_sweep(const GlobalOpts& g, bool resume) {
  const json cfg = load_config(g);
  const std::uint64_t seed = effective_seed(g, cfg);
  const auto ds = load_dataset_block(cfg, g);
  if (ds.normalized)
    throw ConfigError("sweep needs the raw dataset (normalization is refit per row)");

  SweepGrid grid;
  if (cfg.contains("sweep")) {
    const json& s = cfg["sweep"];
    reject_unknown_keys(s, "sweep",
                        {"cell_kinds", "layers", "neurons", "train_steps",
                         "num_sequences", "train_fractions", "lr", "clip_norm",
                         "tbptt_len"});
    if (s.contains("cell_kinds")) {
      grid.cell_kinds.clear();
      for (const auto& k : s["cell_kinds"])
        grid.cell_kinds.push_back(cell_kind_from_name(k.get<std::string>()));
    }
    if (s.contains("layers")) grid.layers = s["layers"].get<std::vector<std::size_t>>();
    if (s.contains("neurons")) grid.neurons = s["neurons"].get<std::vector<std::size_t>>();
    if (s.contains("train_steps"))
      grid.train_steps = s["train_steps"].get<std::vector<std::size_t>>();
    if (s.contains("num_sequences"))
      grid.num_sequences = s["num_sequences"].get<std::vector<std::size_t>>();
    if (s.contains("train_fractions"))
      grid.train_fractions = s["train_fractions"].get<std::vector<double>>();
    grid.lr = s.value("lr", 3e-3);
    grid.clip_norm = s.value("clip_norm", 1.0);
    grid.tbptt_len = s.value("tbptt_len", std::size_t{64});
  }

  const fs::path csv_path = fs::path(g.out_dir) / "sweep.csv";
  std::vector<std::string> resume_keys;
  std::string previous_rows;
  if (resume && fs::exists(csv_path)) {
    std::istringstream in(read_file(csv_path));
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      std::istringstream row(line);
      std::string kind, layers, neurons, steps, nseq, frac;
      std::getline(row, kind, ',');
      std::getline(row, layers, ',');
      std::getline(row, neurons, ',');
      std::getline(row, steps, ',');
      std::getline(row, nseq, ',');
      std::getline(row, frac, ',');
      resume_keys.push_back(kind + ':' + layers + ':' + neurons + ':' + steps +
                            ':' + nseq + ':' + frac);
      previous_rows += line + '\n';
    }
  }

  const auto report = architecture_sweep(ds, grid, seed, g.threads, resume_keys);
  std::string csv = report.to_csv();
  if (!previous_rows.empty()) csv += previous_rows;
  atomic_write(csv_path, csv);
  echo_resolved_config(g, cfg, "sweep", seed);
  std::cout << "sweep.csv written (" << report.rows.size() << " new rows, "
            << resume_keys.size() << " resumed)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wavemotion: parametric sea synthesis, vessel motion oracle, and "
      "recurrent/functional surrogate training"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path, "Path to the JSON run config")
      ->envname("WAVEMOTION_CONFIG");
  auto* seed_opt =
      app.add_option("--seed", g.seed, "Global seed (overrides the config)")
          ->envname("WAVEMOTION_SEED");
  app.add_option("--out-dir", g.out_dir, "Output directory (default: out)")
      ->envname("WAVEMOTION_OUT_DIR");
  app.add_option("--threads", g.threads, "Worker threads for the sweep")
      ->envname("WAVEMOTION_THREADS");

  app.add_subcommand("spectrum", "Write the spectral density and cumulative energy table");
  app.add_subcommand("waves", "Synthesize probe elevation time series");
  app.add_subcommand("oracle", "Integrate the vessel oracle on one wave realization");
  app.add_subcommand("dataset", "Build and store a (waves, motions) dataset");
  app.add_subcommand("train", "Train a surrogate on a stored dataset");
  app.add_subcommand("eval", "Evaluate a checkpoint on the dataset's test split");
  app.add_subcommand("predict", "Run a checkpoint on an elevation CSV");
  auto* sweep = app.add_subcommand("sweep", "Train/evaluate an architecture grid");
  bool resume = false;
  sweep->add_flag("--resume", resume, "Skip rows already present in sweep.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  g.seed_set = seed_opt->count() > 0;

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "spectrum") return cmd_spectrum(g);
    if (cmd == "waves") return cmd_waves(g);
    if (cmd == "oracle") return cmd_oracle(g);
    if (cmd == "dataset") return cmd_dataset(g);
    if (cmd == "train") return cmd_train(g);
    if (cmd == "eval") return cmd_eval(g);
    if (cmd == "predict") return cmd_predict(g);
    if (cmd == "sweep") return cmd_sweep(g, resume);
    throw ConfigError("unknown command " + cmd);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const MissingDependencyError& e) {
    std::cerr << "missing dependency: " << e.what() << '\n';
    return 4;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 5;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
