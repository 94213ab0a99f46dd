#pragma once

#include "syncdgc/config.hpp"
#include "syncdgc/matrix.hpp"
#include "syncdgc/rng.hpp"

namespace syncdgc {

enum class Similarity { kCosine, kPearson };

// Output of one refinement pass. Everything here is gradient-free.
struct RefinedGraph {
  Matrix a_s;         // sampled adjacency, entries {0, 0.5, 1}, symmetric
  Matrix a_p;         // confidence-weighted refined adjacency, entries [0,1]
  Matrix added_mask;  // 0/1 marks for injected links
  Matrix confidence;  // fused edge confidence (all ones when weighting is off)
};

// (a_hat_p + s_xp)/2 clamped to [0,1].
Matrix fuse_probability(const Matrix& a_hat_p, const Matrix& s_xp);

struct LinkResult {
  Matrix a_add;
  Matrix a_mask;
};

// For each node, marks the strongest missing edge (row argmax of the residual
// p_prime − p_prime ⊙ a_tilde, ties to the lowest column) symmetrically in
// a_add; a_mask = a_tilde + a_add saturated to {0,1}. Rows with an all-zero
// residual add nothing.
LinkResult add_links(const Matrix& p_prime, const Matrix& a_tilde);

// Draws every entry of p_prime ⊙ a_mask independently, row-major, so the
// result is reproducible from the rng state alone. May be asymmetric.
Matrix bernoulli_sample(const Matrix& p_prime, const Matrix& a_mask, Rng& rng);

// (a + aᵀ)/2: unidirectional edges drop to weight 0.5.
Matrix symmetrize_penalty(const Matrix& a_s);

// Row-L2-normalized D̃ A D̃ followed by (M+Mᵀ)/2, where D̃ holds degrees of
// a_s + I. Enumerates edges sparsely.
Matrix edge_importance(const Matrix& a_s);

// Full pipeline: fuse → link → sample → symmetrize → importance → weight.
// Switches turn stages off: link off keeps a_mask = a_tilde, pruning off
// keeps every candidate edge instead of sampling, weighting off leaves
// a_p = a_s. All off is the identity (a_p = a_tilde).
RefinedGraph refine(const Matrix& a_hat_p, const Matrix& x_p, const Matrix& a_tilde, Rng& rng,
                    const SfSwitches& switches, Similarity sim = Similarity::kCosine);

}  // namespace syncdgc
