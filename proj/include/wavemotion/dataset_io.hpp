#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "wavemotion/io.hpp"
#include "wavemotion/training_harness.hpp"

namespace wavemotion {

/// Dataset container: a directory holding manifest.json plus one CSV per
/// sequence (time, input channels, target channels). CSVs always store raw
/// physical units; normalization stats travel in the manifest.
inline void save_dataset(const Dataset& ds, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create dataset directory " + dir.string());

  nlohmann::json manifest;
  manifest["version"] = 1;
  manifest["dt"] = ds.dt;
  manifest["input_dim"] = ds.input_dim;
  manifest["output_dim"] = ds.output_dim;
  manifest["preset"] = ds.preset_id;
  manifest["spectrum_components"] = ds.spectrum_components;
  manifest["sea"] = {{"hs", ds.sea.hs},       {"t1", ds.sea.t1},
                     {"tp", ds.sea.tp},       {"depth", ds.sea.depth},
                     {"gravity", ds.sea.gravity}, {"heading", ds.sea.heading}};
  manifest["normalized"] = ds.normalized;
  if (ds.normalized)
    manifest["norm"] = {{"in_mean", ds.norm.in_mean},
                        {"in_scale", ds.norm.in_scale},
                        {"out_mean", ds.norm.out_mean},
                        {"out_scale", ds.norm.out_scale}};

  nlohmann::json seqs = nlohmann::json::array();
  for (std::size_t s = 0; s < ds.sequences.size(); ++s) {
    const SequencePair& seq = ds.sequences[s];
    const std::string file = "sequence_" + std::to_string(s) + ".csv";
    seqs.push_back({{"file", file},
                    {"seed", seq.wave_seed},
                    {"is_train", seq.is_train},
                    {"train_fraction", seq.train_fraction},
                    {"steps", seq.inputs.rows}});
    RealMatrix raw_in = seq.inputs;
    RealMatrix raw_tgt = seq.targets;
    if (ds.normalized) {
      detail::apply_affine(raw_in, ds.norm.in_mean, ds.norm.in_scale, false);
      detail::apply_affine(raw_tgt, ds.norm.out_mean, ds.norm.out_scale, false);
    }
    std::ostringstream out;
    out.precision(17);
    out << "time";
    for (std::size_t c = 0; c < ds.input_dim; ++c) out << ",elevation_" << c;
    const char* names[] = {"heave", "pitch", "roll"};
    for (std::size_t c = 0; c < ds.output_dim; ++c) out << ',' << names[c];
    out << '\n';
    for (std::size_t t = 0; t < seq.inputs.rows; ++t) {
      out << ds.dt * static_cast<double>(t);
      for (std::size_t c = 0; c < ds.input_dim; ++c) out << ',' << raw_in(t, c);
      for (std::size_t c = 0; c < ds.output_dim; ++c) out << ',' << raw_tgt(t, c);
      out << '\n';
    }
    atomic_write(dir / file, out.str());
  }
  manifest["sequences"] = seqs;
  atomic_write(dir / "manifest.json", manifest.dump(2) + "\n");
}

inline Dataset load_dataset(const std::filesystem::path& dir) {
  const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  Dataset ds;
  ds.dt = manifest.at("dt").get<double>();
  ds.input_dim = manifest.at("input_dim").get<std::size_t>();
  ds.output_dim = manifest.at("output_dim").get<std::size_t>();
  ds.preset_id = manifest.value("preset", "");
  ds.spectrum_components = manifest.value("spectrum_components", std::size_t{200});
  if (manifest.contains("sea")) {
    const auto& sea = manifest["sea"];
    ds.sea.hs = sea.value("hs", 0.0);
    ds.sea.t1 = sea.value("t1", 0.0);
    ds.sea.tp = sea.value("tp", 0.0);
    ds.sea.depth = sea.value("depth", 0.0);
    ds.sea.gravity = sea.value("gravity", 9.81);
    ds.sea.heading = sea.value("heading", 0.0);
  }
  ds.normalized = manifest.value("normalized", false);
  if (ds.normalized) {
    const auto& n = manifest.at("norm");
    ds.norm.in_mean = n.at("in_mean").get<std::vector<double>>();
    ds.norm.in_scale = n.at("in_scale").get<std::vector<double>>();
    ds.norm.out_mean = n.at("out_mean").get<std::vector<double>>();
    ds.norm.out_scale = n.at("out_scale").get<std::vector<double>>();
  }

  for (const auto& entry : manifest.at("sequences")) {
    SequencePair seq;
    seq.wave_seed = entry.at("seed").get<std::uint64_t>();
    seq.is_train = entry.at("is_train").get<bool>();
    seq.train_fraction = entry.at("train_fraction").get<double>();
    const std::size_t steps = entry.at("steps").get<std::size_t>();
    seq.inputs = RealMatrix(steps, ds.input_dim);
    seq.targets = RealMatrix(steps, ds.output_dim);

    std::ifstream in(dir / entry.at("file").get<std::string>());
    if (!in)
      throw MissingDependencyError("dataset sequence file missing: " +
                                   (dir / entry.at("file").get<std::string>()).string());
    std::string line;
    std::getline(in, line);  // header
    for (std::size_t t = 0; t < steps; ++t) {
      if (!std::getline(in, line))
        throw IoError("dataset sequence truncated at row " + std::to_string(t));
      std::istringstream row(line);
      std::string cell;
      std::getline(row, cell, ',');  // time column
      for (std::size_t c = 0; c < ds.input_dim; ++c) {
        std::getline(row, cell, ',');
        seq.inputs(t, c) = std::stod(cell);
      }
      for (std::size_t c = 0; c < ds.output_dim; ++c) {
        std::getline(row, cell, ',');
        seq.targets(t, c) = std::stod(cell);
      }
    }
    if (ds.normalized) {
      detail::apply_affine(seq.inputs, ds.norm.in_mean, ds.norm.in_scale, true);
      detail::apply_affine(seq.targets, ds.norm.out_mean, ds.norm.out_scale, true);
    }
    ds.sequences.push_back(std::move(seq));
  }
  return ds;
}

}  // namespace wavemotion
