#pragma once

#include <vector>

#include "syncdgc/matrix.hpp"

namespace syncdgc {

// An undirected attributed graph. Adjacency is dense, symmetric, with a zero
// diagonal; labels are optional (empty = absent).
struct Graph {
  Matrix adjacency;
  Matrix features;
  std::vector<int> labels;

  int n() const { return adjacency.rows(); }
  bool has_labels() const { return !labels.empty(); }
  int num_classes() const;
};

// Throws std::invalid_argument if the adjacency is not square/symmetric, the
// diagonal is nonzero, features have the wrong row count, or labels are
// negative / wrong length.
void validate_graph(const Graph& g);

// A + I (the diagonal must be zero beforehand; validate_graph enforces that).
Matrix with_self_loops(const Matrix& adjacency);

// D̃^{-1/2}(A+I)D̃^{-1/2} with D̃ the degree matrix of A+I.
Matrix normalize(const Matrix& adjacency);

// Pairwise cosine similarity of the rows of x. Zero rows score 0 against
// everything; the diagonal is 1. Entries clamped to [-1, 1].
Matrix cosine_similarity(const Matrix& x);

// Pearson correlation of the rows: cosine similarity after centering each row
// at its mean. Constant rows behave like zero rows.
Matrix pearson_similarity(const Matrix& x);

// Fraction of edges whose endpoints share a label. Requires labels; a graph
// without edges scores 0.
double homophily_ratio(const Graph& g);

// (1/2) tr(FᵀLF) with L = D - A built from the raw adjacency.
double dirichlet_energy(const Graph& g, const Matrix& f);

}  // namespace syncdgc
