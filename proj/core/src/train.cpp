#include "syncdgc/train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "syncdgc/adam.hpp"
#include "syncdgc/errors.hpp"
#include "syncdgc/metrics.hpp"

namespace syncdgc {

namespace {

std::string json_number(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void append_metric(std::string& line, const char* key, const std::optional<double>& v) {
  if (!v) return;
  line += ",\"";
  line += key;
  line += "\":";
  line += json_number(*v);
}

void fill_scores(EpochTrace& t, const std::vector<int>& pred, const std::vector<int>& truth) {
  const EvalScores s = evaluate_labels(pred, truth);
  t.acc = s.acc;
  t.nmi = s.nmi;
  t.ari = s.ari;
  t.f1 = s.f1;
}

}  // namespace

EvalScores evaluate_labels(const std::vector<int>& y_pred, const std::vector<int>& y_true) {
  EvalScores s;
  s.acc = accuracy(y_true, y_pred);
  s.nmi = nmi(y_true, y_pred);
  s.ari = ari(y_true, y_pred);
  s.f1 = macro_f1(y_true, y_pred);
  return s;
}

TrainResult train(const Graph& g, ModelParams params, const Config& cfg,
                  const TrainOptions& opts) {
  if (cfg.k > g.n())
    throw std::invalid_argument("train: k=" + std::to_string(cfg.k) + " exceeds " +
                                std::to_string(g.n()) + " nodes");
  const Matrix l_orig = normalize(g.adjacency);
  const Matrix a_tilde = with_self_loops(g.adjacency);

  const EncodeOutput warm = encode(params, l_orig, g.features);
  Rng kmeans_rng(child_seed(cfg.seed, kSeedKmeans));
  KmeansResult km = kmeans(warm.z, cfg.k, kmeans_rng);

  TrainResult result;
  result.centers = std::move(km.centers);
  result.labels = std::move(km.labels);

  Rng refine_rng(child_seed(cfg.seed, kSeedRefine));
  Adam opt(cfg.lr);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    const EncodeOutput pred = encode(params, l_orig, g.features);
    const RefinedGraph rg =
        refine(pred.a_hat, pred.x_t, a_tilde, refine_rng, opts.sf, opts.similarity);
    const Matrix l_refined = normalize(rg.a_p);

    Tape tape;
    TigaeNodes nodes{};
    Tape::NodeId mu = -1, q_node = -1, loss = -1;
    try {
      nodes = encode_on_tape(tape, params, l_refined, g.features);
      mu = tape.param(result.centers);
      q_node = soft_assign_on_tape(tape, nodes.z, mu);
      const Tape::NodeId recon = tape.scale(
          tape.frobenius(tape.sub(nodes.a_hat, tape.constant(rg.a_s))), 1.0 / double(g.n()));
      loss = cfg.beta != 0.0
                 ? tape.add(recon, tape.scale(tape.categorical_ce(
                                                  tape.constant(target_distribution(
                                                      tape.value(q_node))),
                                                  q_node),
                                              cfg.beta))
                 : recon;
    } catch (const std::invalid_argument& e) {
      // Inputs were validated before the loop, so a kernel precondition can
      // only fail here because the weights have blown up (e.g. a saturated
      // soft assignment with an all-zero row).
      throw TrainingError(std::string("training numerics diverged: ") + e.what(), epoch);
    }
    const Matrix& q = tape.value(q_node);
    const double lv = tape.value(loss)(0, 0);
    if (!std::isfinite(lv)) throw TrainingError("training loss is not finite", epoch);

    result.labels = hard_labels(q);
    EpochTrace trace;
    trace.epoch = epoch;
    trace.loss = lv;
    if (g.has_labels()) fill_scores(trace, result.labels, g.labels);
    result.traces.push_back(trace);

    tape.backward(loss);
    opt.step({&params.w_a, &params.w_b, &params.w_1, &params.w_2, &result.centers},
             {&tape.grad(nodes.w_a), &tape.grad(nodes.w_b), &tape.grad(nodes.w_1),
              &tape.grad(nodes.w_2), &tape.grad(mu)});
  }
  result.params = std::move(params);
  return result;
}

Variant parse_variant(const std::string& name) {
  std::string s;
  for (char c : name) s += char(std::tolower(static_cast<unsigned char>(c)));
  if (s == "g") return Variant::kG;
  if (s == "g+t") return Variant::kGT;
  if (s == "g+t+m") return Variant::kGTM;
  if (s == "sync") return Variant::kSync;
  throw std::invalid_argument("unknown variant '" + name + "' (expected g, g+t, g+t+m, sync)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::kG: return "g";
    case Variant::kGT: return "g+t";
    case Variant::kGTM: return "g+t+m";
    case Variant::kSync: return "sync";
  }
  return "?";
}

namespace {

// Reconstruction-only GAE training + k-means: the "G" ablation.
TrainResult run_gae_baseline(const Graph& g, const Config& pre_cfg, const Config& cfg) {
  const Matrix l_orig = normalize(g.adjacency);
  const Matrix a_tilde = with_self_loops(g.adjacency);
  Rng init_rng(child_seed(cfg.seed, kSeedParamInit));
  GaeParams params = init_gae_params(g.features.cols(), cfg.hidden_or_default(), cfg.embed_dim,
                                     init_rng);
  Adam opt(pre_cfg.lr);
  TrainResult result;
  const int epochs = pre_cfg.epochs + cfg.epochs;
  for (int epoch = 1; epoch <= epochs; ++epoch) {
    Tape tape;
    const GaeNodes nodes = gae_encode_on_tape(tape, params, l_orig, g.features);
    const Tape::NodeId loss = tape.scale(
        tape.frobenius(tape.sub(nodes.a_hat, tape.constant(a_tilde))), 1.0 / double(g.n()));
    const double lv = tape.value(loss)(0, 0);
    if (!std::isfinite(lv)) throw TrainingError("baseline loss is not finite", epoch);
    result.traces.push_back({epoch, lv, {}, {}, {}, {}});
    tape.backward(loss);
    opt.step({&params.w_1, &params.w_2}, {&tape.grad(nodes.w_1), &tape.grad(nodes.w_2)});
  }
  const EncodeOutput out = gae_encode(params, l_orig, g.features);
  Rng kmeans_rng(child_seed(cfg.seed, kSeedKmeans));
  KmeansResult km = kmeans(out.z, cfg.k, kmeans_rng);
  result.labels = std::move(km.labels);
  result.centers = std::move(km.centers);
  return result;
}

// Pretraining objective only + k-means: the "G+T" ablation.
TrainResult run_transform_baseline(const Graph& g, const Config& pre_cfg, const Config& cfg) {
  Config merged = pre_cfg;
  merged.epochs = pre_cfg.epochs + cfg.epochs;
  merged.seed = cfg.seed;
  Rng init_rng(child_seed(cfg.seed, kSeedParamInit));
  std::vector<double> losses;
  ModelParams params = pretrain(g, merged, init_rng, &losses);
  TrainResult result;
  for (std::size_t i = 0; i < losses.size(); ++i)
    result.traces.push_back({int(i) + 1, losses[i], {}, {}, {}, {}});
  const EncodeOutput out = encode(params, normalize(g.adjacency), g.features);
  Rng kmeans_rng(child_seed(cfg.seed, kSeedKmeans));
  KmeansResult km = kmeans(out.z, cfg.k, kmeans_rng);
  result.labels = std::move(km.labels);
  result.centers = std::move(km.centers);
  result.params = std::move(params);
  return result;
}

}  // namespace

TrainResult run_variant(const Graph& g, Variant v, const Config& pre_cfg, const Config& cfg,
                        const TrainOptions& opts) {
  switch (v) {
    case Variant::kG:
      return run_gae_baseline(g, pre_cfg, cfg);
    case Variant::kGT:
      return run_transform_baseline(g, pre_cfg, cfg);
    case Variant::kGTM: {
      Rng init_rng(child_seed(cfg.seed, kSeedParamInit));
      ModelParams params = pretrain(g, pre_cfg, init_rng);
      TrainOptions off = opts;
      off.sf = SfSwitches{false, false, false};
      return train(g, std::move(params), cfg, off);
    }
    case Variant::kSync: {
      Rng init_rng(child_seed(cfg.seed, kSeedParamInit));
      ModelParams params = pretrain(g, pre_cfg, init_rng);
      return train(g, std::move(params), cfg, opts);
    }
  }
  throw std::invalid_argument("run_variant: bad variant");
}

std::string trace_to_jsonl(const std::vector<EpochTrace>& traces) {
  std::string out;
  for (const EpochTrace& t : traces) {
    std::string line = "{\"epoch\":" + std::to_string(t.epoch);
    line += ",\"loss\":" + json_number(t.loss);
    append_metric(line, "acc", t.acc);
    append_metric(line, "nmi", t.nmi);
    append_metric(line, "ari", t.ari);
    append_metric(line, "f1", t.f1);
    line += "}\n";
    out += line;
  }
  return out;
}

}  // namespace syncdgc
