#pragma once

#include <functional>
#include <vector>

#include "syncdgc/matrix.hpp"

namespace syncdgc {

// Reverse-mode automatic differentiation over whole matrices.
//
// Forward calls append nodes in topological order (inputs always precede
// consumers); backward() seeds the scalar loss with 1 and sweeps the node
// list once in reverse, accumulating adjoints. Nodes reachable only from
// constants carry no gradient state, so constant inputs (normalized
// adjacencies, sampled graphs, targets) cost nothing on the way back.
class Tape {
 public:
  using NodeId = int;

  NodeId constant(Matrix value);  // no gradient tracked
  NodeId param(Matrix value);     // gradient available after backward()

  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId hadamard(NodeId a, NodeId b);
  NodeId scale(NodeId a, double s);
  NodeId affine(NodeId a, double s, double t);
  NodeId matmul(NodeId a, NodeId b);
  NodeId transpose(NodeId a);
  NodeId relu(NodeId a);
  NodeId sigmoid(NodeId a);
  NodeId reciprocal1p(NodeId a);      // 1 / (1 + x), the Student-t kernel
  NodeId row_normalize(NodeId a);     // rows scaled to sum 1
  NodeId row_l2_normalize(NodeId a);  // rows scaled to unit L2 norm
  NodeId pairwise_sqdist(NodeId z, NodeId mu);

  // Scalar-valued reductions (1x1 results).
  NodeId sum(NodeId a);
  NodeId frobenius(NodeId a);
  NodeId mean_bce(NodeId p, NodeId t);        // elementwise BCE, mean
  NodeId categorical_ce(NodeId p, NodeId q);  // -(1/rows) sum p ln max(q, 1e-12)

  const Matrix& value(NodeId id) const;
  // Adjoint of a param node; valid after backward(). Zero matrix if the
  // node does not influence the loss.
  const Matrix& grad(NodeId id);
  void backward(NodeId loss);

  int size() const { return int(nodes_.size()); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;  // allocated lazily during backward
    NodeId a = -1, b = -1;
    bool requires_grad = false;
    std::function<void(Tape&, NodeId)> pull;  // adds self grad into inputs
  };

  NodeId push(Matrix value, NodeId a, NodeId b, std::function<void(Tape&, NodeId)> pull);
  Node& node(NodeId id) { return nodes_[std::size_t(id)]; }
  const Node& node(NodeId id) const { return nodes_[std::size_t(id)]; }
  Matrix& ensure_grad(NodeId id);
  void check_id(NodeId id) const;

  std::vector<Node> nodes_;
  bool swept_ = false;
};

inline constexpr double kCeEps = 1e-12;  // clamp for ln q in categorical CE

}  // namespace syncdgc
