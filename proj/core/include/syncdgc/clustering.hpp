#pragma once

#include <vector>

#include "syncdgc/matrix.hpp"
#include "syncdgc/rng.hpp"
#include "syncdgc/tape.hpp"

namespace syncdgc {

struct KmeansResult {
  Matrix centers;  // k×d
  std::vector<int> labels;
  double inertia;
};

// Lloyd's algorithm with k-means++ seeding, 20 restarts, 300 iterations max,
// best inertia kept. Empty clusters are re-seeded to the point farthest from
// its current center. Throws std::invalid_argument when k > n or k < 1.
KmeansResult kmeans(const Matrix& z, int k, Rng& rng);

// q_ij = (1+‖z_i−μ_j‖²)^{-1}, rows normalized to sum 1.
Matrix soft_assign(const Matrix& z, const Matrix& centers);

// Recorded version used by the training loop; z and centers are tape nodes.
Tape::NodeId soft_assign_on_tape(Tape& tape, Tape::NodeId z, Tape::NodeId centers);

// p_ij ∝ q_ij²/Σ_i q_ij, rows normalized. Computed gradient-free.
Matrix target_distribution(const Matrix& q);

// −(1/n)·Σ_ij p_ij·ln(max(q_ij, 1e−12))
double clustering_loss(const Matrix& q, const Matrix& p);

// (1/n)·‖a_hat − a_s‖_F + beta·clustering_loss(q, p)
double total_loss(const Matrix& a_hat, const Matrix& a_s, const Matrix& q, const Matrix& p,
                  double beta);

// Row argmax, ties to the lowest index.
std::vector<int> hard_labels(const Matrix& q);

}  // namespace syncdgc
