#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wavemotion/errors.hpp"
#include "wavemotion/functional_net.hpp"
#include "wavemotion/io.hpp"
#include "wavemotion/neural_core.hpp"

namespace wavemotion {

/// Per-channel affine maps fitted on the training split; applied to test
/// data unchanged and inverted exactly at prediction time.
struct Normalization {
  std::vector<double> in_mean, in_scale;
  std::vector<double> out_mean, out_scale;

  bool empty() const { return in_mean.empty(); }
};

/// A trained surrogate: either a recurrent stack or a functional net, plus
/// everything needed to run it on raw probe data (normalization, dt).
struct Checkpoint {
  std::string model_kind;  // "vanilla" | "gru" | "lstm" | "functional"
  RecurrentStack stack;
  FunctionalNetParams functional;
  Normalization norm;
  double dt = 0.0;
  nlohmann::json metadata;  // training config, loss summary, seeds

  bool is_functional() const { return model_kind == "functional"; }
};

inline std::string serialize_checkpoint(const Checkpoint& ck) {
  nlohmann::json h;
  h["model_kind"] = ck.model_kind;
  h["dt"] = ck.dt;
  h["norm"] = {{"in_mean", ck.norm.in_mean},
               {"in_scale", ck.norm.in_scale},
               {"out_mean", ck.norm.out_mean},
               {"out_scale", ck.norm.out_scale}};
  h["metadata"] = ck.metadata;

  BinaryContainer c;
  c.magic = "WMCK";
  c.version = 1;
  if (ck.is_functional()) {
    h["functional"] = {{"hidden_units", ck.functional.hidden_units},
                       {"num_samples", ck.functional.num_samples},
                       {"output_dim", ck.functional.output_dim},
                       {"half_width", ck.functional.half_width},
                       {"causal", ck.functional.causal}};
    c.payload = ck.functional.params;
  } else {
    h["stack"] = {{"cell_kind", cell_kind_name(ck.stack.kind())},
                  {"input_dim", ck.stack.input_dim()},
                  {"hidden_dims", ck.stack.hidden_dims()},
                  {"output_dim", ck.stack.output_dim()}};
    c.payload = ck.stack.params();
  }
  c.header_json = h.dump();
  return c.serialize();
}

inline Checkpoint deserialize_checkpoint(const std::string& bytes) {
  const auto c = BinaryContainer::deserialize(bytes, "WMCK");
  nlohmann::json h = nlohmann::json::parse(c.header_json);
  Checkpoint ck;
  ck.model_kind = h.at("model_kind").get<std::string>();
  ck.dt = h.at("dt").get<double>();
  const auto& n = h.at("norm");
  ck.norm.in_mean = n.at("in_mean").get<std::vector<double>>();
  ck.norm.in_scale = n.at("in_scale").get<std::vector<double>>();
  ck.norm.out_mean = n.at("out_mean").get<std::vector<double>>();
  ck.norm.out_scale = n.at("out_scale").get<std::vector<double>>();
  ck.metadata = h.value("metadata", nlohmann::json::object());

  if (ck.model_kind == "functional") {
    const auto& f = h.at("functional");
    ck.functional.hidden_units = f.at("hidden_units").get<std::size_t>();
    ck.functional.num_samples = f.at("num_samples").get<std::size_t>();
    ck.functional.output_dim = f.at("output_dim").get<std::size_t>();
    ck.functional.half_width = f.at("half_width").get<double>();
    ck.functional.causal = f.at("causal").get<bool>();
    ck.functional.params = c.payload;
    ck.functional.validate();
  } else {
    const auto& s = h.at("stack");
    ck.stack = RecurrentStack(cell_kind_from_name(s.at("cell_kind").get<std::string>()),
                              s.at("input_dim").get<std::size_t>(),
                              s.at("hidden_dims").get<std::vector<std::size_t>>(),
                              s.at("output_dim").get<std::size_t>());
    if (ck.stack.params().size() != c.payload.size())
      throw IoError("checkpoint payload size does not match stack shape");
    ck.stack.params() = c.payload;
    ck.stack.bump_revision();
  }
  return ck;
}

inline void save_checkpoint(const Checkpoint& ck, const std::filesystem::path& path) {
  atomic_write(path, serialize_checkpoint(ck));
  // Human-readable sidecar with the config and training metadata.
  nlohmann::json side;
  side["model_kind"] = ck.model_kind;
  side["dt"] = ck.dt;
  side["metadata"] = ck.metadata;
  if (!ck.is_functional()) {
    side["cell_kind"] = cell_kind_name(ck.stack.kind());
    side["hidden_dims"] = ck.stack.hidden_dims();
    side["input_dim"] = ck.stack.input_dim();
    side["output_dim"] = ck.stack.output_dim();
  }
  atomic_write(path.string() + ".json", side.dump(2) + "\n");
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(read_file(path));
}

}  // namespace wavemotion
