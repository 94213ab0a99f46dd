#include "syncdgc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "syncdgc/errors.hpp"

namespace syncdgc {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* key) {
  if (!j.at(key).is_number())
    throw std::invalid_argument(std::string("config: '") + key + "' must be a number");
  return j.at(key).get<double>();
}

int require_int(const json& j, const char* key) {
  if (!j.at(key).is_number_integer())
    throw std::invalid_argument(std::string("config: '") + key + "' must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");

  static const std::set<std::string> known = {"lr",   "epochs", "alpha",      "beta",
                                              "transform_dim", "k", "seed",
                                              "hidden_dim",    "embed_dim"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key()))
      throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  for (const char* key : {"lr", "epochs", "alpha", "beta", "transform_dim", "k"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("config: missing key '") + key + "'");

  Config cfg;
  cfg.lr = require_number(j, "lr");
  cfg.epochs = require_int(j, "epochs");
  cfg.alpha = require_number(j, "alpha");
  cfg.beta = require_number(j, "beta");
  cfg.transform_dim = require_int(j, "transform_dim");
  cfg.k = require_int(j, "k");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw std::invalid_argument("config: 'seed' must be a nonnegative integer");
    if (j.at("seed").is_number_integer() && j.at("seed").get<long long>() < 0)
      throw std::invalid_argument("config: 'seed' must be a nonnegative integer");
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("hidden_dim")) cfg.hidden_dim = require_int(j, "hidden_dim");
  if (j.contains("embed_dim")) cfg.embed_dim = require_int(j, "embed_dim");

  if (cfg.lr <= 0.0) throw std::invalid_argument("config: 'lr' must be positive");
  if (cfg.epochs < 0) throw std::invalid_argument("config: 'epochs' must be nonnegative");
  if (cfg.alpha < 0.0) throw std::invalid_argument("config: 'alpha' must be nonnegative");
  if (cfg.beta < 0.0) throw std::invalid_argument("config: 'beta' must be nonnegative");
  if (cfg.transform_dim < 1) throw std::invalid_argument("config: 'transform_dim' must be >= 1");
  if (cfg.k < 1) throw std::invalid_argument("config: 'k' must be >= 1");
  if (cfg.hidden_dim < 0) throw std::invalid_argument("config: 'hidden_dim' must be >= 1");
  if (cfg.embed_dim < 1) throw std::invalid_argument("config: 'embed_dim' must be >= 1");
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const Config& cfg) {
  json j = json::object();
  j["lr"] = cfg.lr;
  j["epochs"] = cfg.epochs;
  j["alpha"] = cfg.alpha;
  j["beta"] = cfg.beta;
  j["transform_dim"] = cfg.transform_dim;
  j["k"] = cfg.k;
  j["seed"] = cfg.seed;
  j["hidden_dim"] = cfg.hidden_or_default();
  j["embed_dim"] = cfg.embed_dim;
  return j.dump(2);
}

Config dataset_defaults(const std::string& name, Stage stage) {
  struct Row {
    const char* name;
    double pre_lr;
    int pre_epochs;
    double alpha;
    double train_lr;
    int train_epochs;
    double beta;
    int transform_dim;
    int k;
  };
  static const Row rows[] = {
      {"acm", 1e-3, 50, 0.0, 2e-3, 50, 1.0, 512, 3},
      {"amap", 1e-3, 80, 1.0, 1e-4, 50, 1.0, 512, 8},
      {"cite", 2e-3, 20, 1.0, 6e-3, 50, 1.0, 512, 6},
      {"cora", 2e-3, 80, 0.0, 5e-3, 50, 0.0, 128, 7},
      {"dblp", 2e-3, 20, 1.0, 2e-2, 50, 1.0, 512, 4},
      {"pubmed", 2e-3, 50, 10.0, 1e-3, 50, 0.0, 128, 3},
      {"texas", 5e-3, 20, 10.0, 5e-3, 50, 0.0, 512, 5},
      {"uat", 2e-3, 50, 0.0, 1e-3, 50, 1.0, 128, 4},
      {"wisconsin", 1e-2, 20, 1.0, 1e-2, 50, 1.0, 512, 5},
  };
  for (const Row& r : rows) {
    if (name != r.name) continue;
    Config cfg;
    cfg.lr = stage == Stage::kPretrain ? r.pre_lr : r.train_lr;
    cfg.epochs = stage == Stage::kPretrain ? r.pre_epochs : r.train_epochs;
    cfg.alpha = r.alpha;
    cfg.beta = r.beta;
    cfg.transform_dim = r.transform_dim;
    cfg.k = r.k;
    return cfg;
  }
  std::string names;
  for (const Row& r : rows) {
    if (!names.empty()) names += ", ";
    names += r.name;
  }
  throw std::invalid_argument("unknown dataset '" + name + "' (known: " + names + ")");
}

}  // namespace syncdgc
