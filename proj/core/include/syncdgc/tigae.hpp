#pragma once

#include <string>
#include <vector>

#include "syncdgc/config.hpp"
#include "syncdgc/graph.hpp"
#include "syncdgc/matrix.hpp"
#include "syncdgc/rng.hpp"
#include "syncdgc/tape.hpp"

namespace syncdgc {

// Encoder weights. There is exactly one copy; every forward pass (recorded or
// not) reads this storage, so the two passes of a training epoch share it.
struct ModelParams {
  Matrix w_a;  // c×d input transform
  Matrix w_b;  // n×c per-node bias, propagated over the graph like a signal
  Matrix w_1;  // c×d1
  Matrix w_2;  // d1×dz

  std::size_t parameter_count() const {
    return w_a.size() + w_b.size() + w_1.size() + w_2.size();
  }
};

// Glorot-uniform W_a, W_1, W_2 (in that draw order), zero W_b.
ModelParams init_params(int n, int d, int c, int d1, int dz, Rng& rng);

struct EncodeOutput {
  Matrix x_t;    // n×c transformed input
  Matrix z;      // n×dz embedding
  Matrix a_hat;  // n×n decoded edge probabilities
};

// Z = L·ReLU(L·(X·W_aᵀ + W_b)·W_1)·W_2, Â = sigmoid(ZZᵀ). With record=true the
// same graph is evaluated through a throwaway tape (values are identical);
// record=false touches no gradient state at all.
EncodeOutput encode(const ModelParams& params, const Matrix& l_norm, const Matrix& x,
                    bool record = false);

// Node handles for a recorded forward pass.
struct TigaeNodes {
  Tape::NodeId w_a, w_b, w_1, w_2;
  Tape::NodeId x_t, z, a_hat;
};

TigaeNodes encode_on_tape(Tape& tape, const ModelParams& params, const Matrix& l_norm,
                          const Matrix& x);

// (1/n)·‖Â − Ã‖_F + alpha·CE(sim(X_t), sim(X)), both similarities mapped to
// [0,1] via (s+1)/2 before the cross-entropy. The alpha term is skipped
// entirely when alpha == 0.
double pretrain_loss(const EncodeOutput& out, const Matrix& a_tilde, const Matrix& s_x,
                     double alpha);

Tape::NodeId pretrain_loss_on_tape(Tape& tape, const TigaeNodes& nodes, const Matrix& a_tilde,
                                   const Matrix& s_x, double alpha);

// Full-batch Adam on the pretraining objective. Throws TrainingError naming
// the epoch if the loss stops being finite. Appends one loss value per epoch
// to *losses when given.
ModelParams pretrain(const Graph& g, const Config& cfg, Rng& rng,
                     std::vector<double>* losses = nullptr);

// Plain two-layer GAE, the ablation baseline: H = L·ReLU(L·X·W_1)·W_2.
struct GaeParams {
  Matrix w_1;  // d×d1
  Matrix w_2;  // d1×dz

  std::size_t parameter_count() const { return w_1.size() + w_2.size(); }
};

GaeParams init_gae_params(int d, int d1, int dz, Rng& rng);

EncodeOutput gae_encode(const GaeParams& params, const Matrix& l_norm, const Matrix& x);

struct GaeNodes {
  Tape::NodeId w_1, w_2;
  Tape::NodeId z, a_hat;
};

GaeNodes gae_encode_on_tape(Tape& tape, const GaeParams& params, const Matrix& l_norm,
                            const Matrix& x);

// Little-endian binary checkpoint so the pretraining and training stages can
// run as separate processes. Throws IoError on unreadable/corrupt files.
void save_checkpoint(const std::string& path, const ModelParams& params);
ModelParams load_checkpoint(const std::string& path);

}  // namespace syncdgc
