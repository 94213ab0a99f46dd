#pragma once

#include <optional>
#include <string>
#include <vector>

#include "syncdgc/clustering.hpp"
#include "syncdgc/config.hpp"
#include "syncdgc/graph.hpp"
#include "syncdgc/structure.hpp"
#include "syncdgc/tigae.hpp"

namespace syncdgc {

struct EpochTrace {
  int epoch = 0;
  double loss = 0.0;
  std::optional<double> acc, nmi, ari, f1;
};

struct EvalScores {
  double acc = 0.0;
  double nmi = 0.0;
  double ari = 0.0;
  double f1 = 0.0;
};

EvalScores evaluate_labels(const std::vector<int>& y_pred, const std::vector<int>& y_true);

struct TrainOptions {
  SfSwitches sf;
  Similarity similarity = Similarity::kCosine;
};

struct TrainResult {
  std::vector<int> labels;
  std::vector<EpochTrace> traces;
  ModelParams params;
  Matrix centers;
};

// The per-epoch loop: gradient-free prediction on the original graph,
// structure refinement, recorded pass over the refined graph through the
// same weight storage, soft/target distributions, loss, Adam step. Centers
// come from k-means on the pretrained embedding and train with the weights.
// Randomness derives from cfg.seed (k-means and refinement streams).
TrainResult train(const Graph& g, ModelParams params, const Config& cfg,
                  const TrainOptions& opts = {});

enum class Variant { kG, kGT, kGTM, kSync };

// Accepts "g", "g+t", "g+t+m", "sync" (case-insensitive).
Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);

// Ablation runner. kG trains a plain GAE on the reconstruction objective and
// clusters with k-means; kGT does the same with the transform-input encoder
// and its pretraining objective; both get pre_cfg.epochs + cfg.epochs so every
// variant consumes the same budget. kGTM runs pretrain + the loop with all
// fine-tuning switches off; kSync is the full pipeline with opts.sf.
TrainResult run_variant(const Graph& g, Variant v, const Config& pre_cfg, const Config& cfg,
                        const TrainOptions& opts = {});

// One line per epoch: {"epoch":3,"loss":0.25,...}; metric keys only when set.
std::string trace_to_jsonl(const std::vector<EpochTrace>& traces);

}  // namespace syncdgc
