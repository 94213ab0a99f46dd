#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "syncdgc/clustering.hpp"
#include "syncdgc/config.hpp"
#include "syncdgc/datasets.hpp"
#include "syncdgc/errors.hpp"
#include "syncdgc/graph.hpp"
#include "syncdgc/metrics.hpp"
#include "syncdgc/structure.hpp"
#include "syncdgc/tigae.hpp"
#include "syncdgc/train.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

void apply_thread_env() {
  const char* env = std::getenv("SYNC_THREADS");
  if (!env || !*env) return;
  int threads = 0;
  const auto [ptr, ec] = std::from_chars(env, env + std::string(env).size(), threads);
  if (ec != std::errc() || *ptr != '\0' || threads < 1)
    throw std::invalid_argument(std::string("SYNC_THREADS must be a positive integer, got '") +
                                env + "'");
  syncdgc::set_max_threads(threads);
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw syncdgc::IoError("cannot write " + path);
  out << content;
  if (!out.flush()) throw syncdgc::IoError("failed writing " + path);
}

std::string labels_to_text(const std::vector<int>& labels) {
  std::string out;
  for (int y : labels) {
    out += std::to_string(y);
    out += '\n';
  }
  return out;
}

std::vector<int> read_label_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw syncdgc::IoError("cannot open labels file: " + path);
  std::vector<int> labels;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    int y = 0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), y);
    if (ec != std::errc() || ptr != line.data() + line.size() || y < 0)
      throw syncdgc::IoError(path + ":" + std::to_string(ln) + ": expected a label id");
    labels.push_back(y);
  }
  return labels;
}

std::string scores_json(const syncdgc::EvalScores& s) {
  json j = json::object();
  j["acc"] = s.acc;
  j["nmi"] = s.nmi;
  j["ari"] = s.ari;
  j["f1"] = s.f1;
  return j.dump(2) + "\n";
}

json dataset_manifest(const std::string& dir, const syncdgc::DatasetBundle& bundle) {
  json j = json::object();
  j["dir"] = dir;
  j["fingerprint"] = fingerprint_hex(syncdgc::fingerprint(bundle.graph));
  j["n"] = bundle.meta.n;
  j["d"] = bundle.meta.d;
  j["k"] = bundle.meta.k;
  j["edges"] = bundle.meta.edges;
  return j;
}

std::string matrix_csv(const syncdgc::Matrix& m) {
  std::string out;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  return out;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file(out_path, content);
}

syncdgc::SfSwitches parse_sf(const std::string& spec) {
  syncdgc::SfSwitches sf;
  if (spec.empty()) return sf;  // default: everything on
  sf = {false, false, false};
  if (spec == "none") return sf;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const std::size_t pos = spec.find(',', start);
    const std::string item =
        pos == std::string::npos ? spec.substr(start) : spec.substr(start, pos - start);
    if (item == "pruning")
      sf.pruning = true;
    else if (item == "link")
      sf.link = true;
    else if (item == "weighting")
      sf.weighting = true;
    else
      throw std::invalid_argument("--sf: unknown switch '" + item +
                                  "' (expected pruning, link, weighting, or none)");
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return sf;
}

struct PretrainArgs {
  std::string data, config, out, print_defaults;
  std::optional<std::uint64_t> seed;
};

int cmd_pretrain(const PretrainArgs& args) {
  if (!args.print_defaults.empty()) {
    std::cout << syncdgc::config_to_json(
                     syncdgc::dataset_defaults(args.print_defaults, syncdgc::Stage::kPretrain))
              << "\n";
    return 0;
  }
  if (args.data.empty()) throw std::invalid_argument("--data is required");
  if (args.config.empty()) throw std::invalid_argument("--config is required");
  if (args.out.empty()) throw std::invalid_argument("--out is required");

  syncdgc::Config cfg = syncdgc::load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  const syncdgc::DatasetBundle bundle = syncdgc::load_dataset(args.data);

  syncdgc::Rng rng(syncdgc::child_seed(cfg.seed, syncdgc::kSeedParamInit));
  std::vector<double> losses;
  const syncdgc::ModelParams params = syncdgc::pretrain(bundle.graph, cfg, rng, &losses);
  syncdgc::save_checkpoint(args.out, params);

  json manifest = json::object();
  manifest["command"] = "pretrain";
  manifest["config"] = json::parse(syncdgc::config_to_json(cfg));
  manifest["seed"] = cfg.seed;
  manifest["dataset"] = dataset_manifest(args.data, bundle);
  manifest["artifacts"] = {{"checkpoint", args.out}};
  if (!losses.empty()) {
    manifest["first_loss"] = losses.front();
    manifest["final_loss"] = losses.back();
  }
  write_file(args.out + ".manifest.json", manifest.dump(2) + "\n");
  return 0;
}

struct TrainArgs {
  std::string data, ckpt, config, out, variant = "sync", sf, similarity = "cosine",
              print_defaults;
  std::optional<std::uint64_t> seed;
};

int cmd_train(const TrainArgs& args) {
  if (!args.print_defaults.empty()) {
    std::cout << syncdgc::config_to_json(
                     syncdgc::dataset_defaults(args.print_defaults, syncdgc::Stage::kTrain))
              << "\n";
    return 0;
  }
  if (args.data.empty()) throw std::invalid_argument("--data is required");
  if (args.config.empty()) throw std::invalid_argument("--config is required");
  if (args.out.empty()) throw std::invalid_argument("--out is required");

  syncdgc::Config cfg = syncdgc::load_config(args.config);
  if (args.seed) cfg.seed = *args.seed;
  const syncdgc::DatasetBundle bundle = syncdgc::load_dataset(args.data);
  const syncdgc::Variant variant = syncdgc::parse_variant(args.variant);

  syncdgc::TrainOptions opts;
  opts.sf = parse_sf(args.sf);
  if (args.similarity == "pearson")
    opts.similarity = syncdgc::Similarity::kPearson;
  else if (args.similarity != "cosine")
    throw std::invalid_argument("--similarity must be cosine or pearson");

  syncdgc::TrainResult result;
  if (variant == syncdgc::Variant::kG || variant == syncdgc::Variant::kGT) {
    if (!args.ckpt.empty())
      std::cerr << "warning: --ckpt is ignored for variant " << syncdgc::variant_name(variant)
                << "\n";
    result = syncdgc::run_variant(bundle.graph, variant, cfg, cfg, opts);
  } else {
    if (args.ckpt.empty())
      throw std::invalid_argument("--ckpt is required for variant " +
                                  syncdgc::variant_name(variant));
    syncdgc::ModelParams params = syncdgc::load_checkpoint(args.ckpt);
    if (variant == syncdgc::Variant::kGTM) opts.sf = syncdgc::SfSwitches{false, false, false};
    result = syncdgc::train(bundle.graph, std::move(params), cfg, opts);
  }

  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (ec) throw syncdgc::IoError("cannot create output directory " + args.out);
  const std::string labels_path = (fs::path(args.out) / "labels.txt").string();
  const std::string trace_path = (fs::path(args.out) / "trace.jsonl").string();
  const std::string metrics_path = (fs::path(args.out) / "metrics.json").string();
  write_file(labels_path, labels_to_text(result.labels));
  write_file(trace_path, syncdgc::trace_to_jsonl(result.traces));

  json manifest = json::object();
  manifest["command"] = "train";
  manifest["variant"] = syncdgc::variant_name(variant);
  manifest["config"] = json::parse(syncdgc::config_to_json(cfg));
  manifest["seed"] = cfg.seed;
  manifest["dataset"] = dataset_manifest(args.data, bundle);
  json artifacts = {{"labels", labels_path}, {"trace", trace_path}};
  if (bundle.graph.has_labels()) {
    const syncdgc::EvalScores scores =
        syncdgc::evaluate_labels(result.labels, bundle.graph.labels);
    write_file(metrics_path, scores_json(scores));
    artifacts["metrics"] = metrics_path;
  }
  manifest["artifacts"] = artifacts;
  write_file((fs::path(args.out) / "manifest.json").string(), manifest.dump(2) + "\n");
  return 0;
}

struct GenerateArgs {
  std::string out;
  int n = 0, k = 0;
  double intra = 0.0, inter = 0.0, noise = 0.0;
  std::uint64_t seed = 325;
};

int cmd_generate(const GenerateArgs& args) {
  if (args.out.empty()) throw std::invalid_argument("--out is required");
  syncdgc::SbmSpec spec;
  spec.n = args.n;
  spec.k = args.k;
  spec.intra_p = args.intra;
  spec.inter_p = args.inter;
  spec.feature_noise = args.noise;
  spec.seed = args.seed;
  const syncdgc::DatasetBundle bundle = syncdgc::generate_sbm(spec);
  syncdgc::save_dataset(args.out, bundle.graph);
  std::cout << "n=" << bundle.meta.n << " d=" << bundle.meta.d << " k=" << bundle.meta.k
            << " edges=" << bundle.meta.edges
            << " homophily=" << format_double(bundle.meta.homophily) << "\n";
  return 0;
}

struct PerturbArgs {
  std::string data, out;
  double mask_ratio = 0.0, add_ratio = 0.0;
  std::uint64_t seed = 325;
};

int cmd_perturb(const PerturbArgs& args) {
  if (args.data.empty()) throw std::invalid_argument("--data is required");
  if (args.out.empty()) throw std::invalid_argument("--out is required");
  const syncdgc::DatasetBundle bundle = syncdgc::load_dataset(args.data);
  syncdgc::Rng rng(args.seed);
  syncdgc::Graph g = bundle.graph;
  if (args.mask_ratio > 0.0) g = syncdgc::perturb_mask_features(g, args.mask_ratio, rng);
  if (args.add_ratio > 0.0) g = syncdgc::perturb_add_edges(g, args.add_ratio, rng);
  syncdgc::save_dataset(args.out, g);
  return 0;
}

struct EvaluateArgs {
  std::string data, labels;
};

int cmd_evaluate(const EvaluateArgs& args) {
  if (args.data.empty()) throw std::invalid_argument("--data is required");
  if (args.labels.empty()) throw std::invalid_argument("--labels is required");
  const syncdgc::DatasetBundle bundle = syncdgc::load_dataset(args.data);
  if (!bundle.graph.has_labels())
    throw std::invalid_argument("dataset has no labels.tsv; nothing to evaluate against");
  const std::vector<int> predicted = read_label_file(args.labels);
  if (predicted.size() != bundle.graph.labels.size())
    throw std::invalid_argument(std::to_string(predicted.size()) + " predicted labels for " +
                                std::to_string(bundle.graph.labels.size()) + " nodes");
  std::cout << scores_json(syncdgc::evaluate_labels(predicted, bundle.graph.labels));
  return 0;
}

struct ReportArgs {
  std::vector<std::string> runs;
  std::string out;
};

int cmd_report(const ReportArgs& args) {
  if (args.runs.empty()) throw std::invalid_argument("--runs needs at least one run directory");
  std::string fingerprint;
  std::vector<syncdgc::EvalScores> scores;
  for (const std::string& dir : args.runs) {
    const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    std::ifstream mf(manifest_path, std::ios::binary);
    if (!mf) throw syncdgc::IoError("cannot open " + manifest_path);
    json manifest;
    try {
      manifest = json::parse(mf);
    } catch (const json::parse_error& e) {
      throw syncdgc::IoError(manifest_path + ": " + e.what());
    }
    const std::string fp = manifest.at("dataset").at("fingerprint").get<std::string>();
    if (fingerprint.empty())
      fingerprint = fp;
    else if (fingerprint != fp)
      throw std::invalid_argument("run " + dir + " was produced from a different dataset");
    const std::string metrics_path = (fs::path(dir) / "metrics.json").string();
    std::ifstream sf(metrics_path, std::ios::binary);
    if (!sf) throw syncdgc::IoError("cannot open " + metrics_path +
                                    " (run has no ground-truth metrics)");
    json metrics;
    try {
      metrics = json::parse(sf);
    } catch (const json::parse_error& e) {
      throw syncdgc::IoError(metrics_path + ": " + e.what());
    }
    syncdgc::EvalScores s;
    s.acc = metrics.at("acc").get<double>();
    s.nmi = metrics.at("nmi").get<double>();
    s.ari = metrics.at("ari").get<double>();
    s.f1 = metrics.at("f1").get<double>();
    scores.push_back(s);
  }

  const auto column = [&](const char* name, auto getter) {
    double mean = 0.0;
    for (const syncdgc::EvalScores& s : scores) mean += getter(s);
    mean /= double(scores.size());
    double var = 0.0;
    for (const syncdgc::EvalScores& s : scores) {
      const double d = getter(s) - mean;
      var += d * d;
    }
    const double std_dev = scores.size() > 1 ? std::sqrt(var / double(scores.size() - 1)) : 0.0;
    return std::string(name) + "," + format_double(mean) + "," + format_double(std_dev) + "\n";
  };
  std::string csv = "metric,mean,std\n";
  csv += column("acc", [](const syncdgc::EvalScores& s) { return s.acc; });
  csv += column("nmi", [](const syncdgc::EvalScores& s) { return s.nmi; });
  csv += column("ari", [](const syncdgc::EvalScores& s) { return s.ari; });
  csv += column("f1", [](const syncdgc::EvalScores& s) { return s.f1; });
  emit(args.out, csv);
  return 0;
}

struct DumpArgs {
  std::string data, ckpt, what, out;
  std::uint64_t seed = 325;
};

int cmd_dump(const DumpArgs& args) {
  if (args.data.empty()) throw std::invalid_argument("--data is required");
  const syncdgc::DatasetBundle bundle = syncdgc::load_dataset(args.data);
  if (args.what == "similarity") {
    if (args.ckpt.empty()) {
      emit(args.out, matrix_csv(syncdgc::cosine_similarity(bundle.graph.features)));
      return 0;
    }
    const syncdgc::ModelParams params = syncdgc::load_checkpoint(args.ckpt);
    const syncdgc::EncodeOutput enc =
        syncdgc::encode(params, syncdgc::normalize(bundle.graph.adjacency),
                        bundle.graph.features);
    emit(args.out, matrix_csv(syncdgc::cosine_similarity(enc.x_t)));
    return 0;
  }
  if (args.ckpt.empty()) throw std::invalid_argument("--ckpt is required for --what " + args.what);
  const syncdgc::ModelParams params = syncdgc::load_checkpoint(args.ckpt);
  const syncdgc::Matrix l_norm = syncdgc::normalize(bundle.graph.adjacency);
  const syncdgc::EncodeOutput enc = syncdgc::encode(params, l_norm, bundle.graph.features);
  if (args.what == "embeddings") {
    emit(args.out, matrix_csv(enc.z));
    return 0;
  }
  if (args.what == "refined") {
    syncdgc::Rng rng(syncdgc::child_seed(args.seed, syncdgc::kSeedRefine));
    const syncdgc::RefinedGraph rg =
        syncdgc::refine(enc.a_hat, enc.x_t, syncdgc::with_self_loops(bundle.graph.adjacency),
                        rng, syncdgc::SfSwitches{});
    emit(args.out, matrix_csv(rg.a_p));
    return 0;
  }
  throw std::invalid_argument("--what must be similarity, refined, or embeddings");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synergistic deep graph clustering pipeline"};
  app.require_subcommand(1);

  PretrainArgs pre;
  CLI::App* pre_cmd = app.add_subcommand("pretrain", "Pretrain the encoder and save a checkpoint");
  pre_cmd->add_option("--data", pre.data, "Dataset directory");
  pre_cmd->add_option("--config", pre.config, "JSON config file");
  pre_cmd->add_option("--out", pre.out, "Checkpoint output path");
  pre_cmd->add_option("--seed", pre.seed, "Override the config seed");
  pre_cmd->add_option("--print-defaults", pre.print_defaults,
                      "Print the pretraining defaults for a named dataset and exit");

  TrainArgs tr;
  CLI::App* tr_cmd = app.add_subcommand("train", "Run the clustering loop from a checkpoint");
  tr_cmd->add_option("--data", tr.data, "Dataset directory");
  tr_cmd->add_option("--ckpt", tr.ckpt, "Pretrained checkpoint");
  tr_cmd->add_option("--config", tr.config, "JSON config file");
  tr_cmd->add_option("--out", tr.out, "Run output directory");
  tr_cmd->add_option("--variant", tr.variant, "g, g+t, g+t+m, or sync (default sync)");
  tr_cmd->add_option("--sf", tr.sf,
                     "Comma list of enabled fine-tuning switches: pruning,link,weighting; "
                     "'none' disables all (default: all on)");
  tr_cmd->add_option("--similarity", tr.similarity, "cosine (default) or pearson");
  tr_cmd->add_option("--seed", tr.seed, "Override the config seed");
  tr_cmd->add_option("--print-defaults", tr.print_defaults,
                     "Print the training defaults for a named dataset and exit");

  GenerateArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Generate a block-model dataset");
  gen_cmd->add_option("--out", gen.out, "Output dataset directory");
  gen_cmd->add_option("--n", gen.n, "Node count")->required();
  gen_cmd->add_option("--k", gen.k, "Block count")->required();
  gen_cmd->add_option("--intra", gen.intra, "Within-block edge probability")->required();
  gen_cmd->add_option("--inter", gen.inter, "Between-block edge probability")->required();
  gen_cmd->add_option("--noise", gen.noise, "Feature noise probability");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed (default 325)");

  PerturbArgs pert;
  CLI::App* pert_cmd = app.add_subcommand("perturb", "Mask features / add random edges");
  pert_cmd->add_option("--data", pert.data, "Input dataset directory");
  pert_cmd->add_option("--out", pert.out, "Output dataset directory");
  pert_cmd->add_option("--mask-ratio", pert.mask_ratio, "Fraction of feature columns to zero");
  pert_cmd->add_option("--add-ratio", pert.add_ratio, "New edges as a fraction of |E|");
  pert_cmd->add_option("--seed", pert.seed, "Perturbation seed (default 325)");

  EvaluateArgs ev;
  CLI::App* ev_cmd = app.add_subcommand("evaluate", "Score a label file against dataset labels");
  ev_cmd->add_option("--data", ev.data, "Dataset directory");
  ev_cmd->add_option("--labels", ev.labels, "Predicted labels, one id per line");

  ReportArgs rep;
  CLI::App* rep_cmd = app.add_subcommand("report", "Aggregate metrics over run directories");
  rep_cmd->add_option("--runs", rep.runs, "Run directories produced by train");
  rep_cmd->add_option("--out", rep.out, "CSV output path (default stdout)");

  DumpArgs dump;
  CLI::App* dump_cmd = app.add_subcommand("dump", "Dump similarity/refined/embeddings as CSV");
  dump_cmd->add_option("--data", dump.data, "Dataset directory");
  dump_cmd->add_option("--ckpt", dump.ckpt, "Checkpoint path");
  dump_cmd->add_option("--what", dump.what, "similarity, refined, or embeddings")->required();
  dump_cmd->add_option("--out", dump.out, "Output path (default stdout)");
  dump_cmd->add_option("--seed", dump.seed, "Seed for the refinement sampler (default 325)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    apply_thread_env();
    if (pre_cmd->parsed()) return cmd_pretrain(pre);
    if (tr_cmd->parsed()) return cmd_train(tr);
    if (gen_cmd->parsed()) return cmd_generate(gen);
    if (pert_cmd->parsed()) return cmd_perturb(pert);
    if (ev_cmd->parsed()) return cmd_evaluate(ev);
    if (rep_cmd->parsed()) return cmd_report(rep);
    if (dump_cmd->parsed()) return cmd_dump(dump);
  } catch (const syncdgc::TrainingError& e) {
    std::cerr << "error: " << e.what() << " (epoch " << e.epoch() << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
