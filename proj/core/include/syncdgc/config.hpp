#pragma once

#include <cstdint>
#include <string>

namespace syncdgc {

// Structure fine-tuning switches (CLI --sf). All on by default.
struct SfSwitches {
  bool pruning = true;
  bool link = true;
  bool weighting = true;

  bool any() const { return pruning || link || weighting; }
};

// Flat hyperparameter set shared by both training stages. The pretraining
// stage reads lr/epochs/alpha, the clustering stage reads lr/epochs/beta;
// transform_dim, k and seed apply to both.
struct Config {
  double lr = 1e-3;
  int epochs = 50;
  double alpha = 0.0;
  double beta = 1.0;
  int transform_dim = 512;
  int k = 3;
  std::uint64_t seed = 325;
  int hidden_dim = 0;  // 0 = transform_dim / 2
  int embed_dim = 16;

  int hidden_or_default() const {
    if (hidden_dim > 0) return hidden_dim;
    return transform_dim / 2 > 0 ? transform_dim / 2 : 1;
  }
};

// Strict JSON parsing: unknown keys, missing required keys, or out-of-range
// values throw std::invalid_argument. seed/hidden_dim/embed_dim are optional.
Config parse_config(const std::string& json_text);

// Reads and parses a config file. Throws IoError if unreadable.
Config load_config(const std::string& path);

// Deterministic JSON snapshot (fixed key order, resolved dims).
std::string config_to_json(const Config& cfg);

enum class Stage { kPretrain, kTrain };

// Per-dataset defaults; stage selects the lr/epochs pair.
// Known names: acm, amap, cite, cora, dblp, pubmed, texas, uat, wisconsin.
Config dataset_defaults(const std::string& name, Stage stage);

}  // namespace syncdgc
