#include "syncdgc/tape.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace syncdgc {

namespace {

void axpy(Matrix& acc, const Matrix& x, double s) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc.data()[i] += s * x.data()[i];
}

}  // namespace

void Tape::check_id(NodeId id) const {
  if (id < 0 || id >= int(nodes_.size())) throw std::invalid_argument("Tape: bad node id");
}

Tape::NodeId Tape::push(Matrix value, NodeId a, NodeId b,
                        std::function<void(Tape&, NodeId)> pull) {
  Node n;
  n.value = std::move(value);
  n.a = a;
  n.b = b;
  n.requires_grad = (a >= 0 && node(a).requires_grad) || (b >= 0 && node(b).requires_grad);
  if (n.requires_grad) n.pull = std::move(pull);
  nodes_.push_back(std::move(n));
  return NodeId(nodes_.size()) - 1;
}

Tape::NodeId Tape::constant(Matrix value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return NodeId(nodes_.size()) - 1;
}

Tape::NodeId Tape::param(Matrix value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = true;
  nodes_.push_back(std::move(n));
  return NodeId(nodes_.size()) - 1;
}

const Matrix& Tape::value(NodeId id) const {
  check_id(id);
  return node(id).value;
}

Matrix& Tape::ensure_grad(NodeId id) {
  Node& n = node(id);
  if (n.grad.empty() && !n.value.empty()) n.grad = Matrix(n.value.rows(), n.value.cols());
  return n.grad;
}

const Matrix& Tape::grad(NodeId id) {
  check_id(id);
  if (!swept_) throw std::logic_error("Tape::grad before backward");
  if (!node(id).requires_grad) throw std::invalid_argument("Tape::grad of a constant node");
  return ensure_grad(id);
}

void Tape::backward(NodeId loss) {
  check_id(loss);
  if (swept_) throw std::logic_error("Tape::backward already run");
  const Matrix& lv = node(loss).value;
  if (lv.rows() != 1 || lv.cols() != 1)
    throw std::invalid_argument("Tape::backward: loss node is " + lv.shape_str() +
                                ", expected 1x1 scalar");
  swept_ = true;
  ensure_grad(loss)(0, 0) = 1.0;
  for (NodeId i = loss; i >= 0; --i) {
    Node& n = node(i);
    if (!n.requires_grad || n.grad.empty() || !n.pull) continue;
    n.pull(*this, i);
  }
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  return push(syncdgc::add(value(a), value(b)), a, b, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    if (t.node(self.a).requires_grad) axpy(t.ensure_grad(self.a), self.grad, 1.0);
    if (t.node(self.b).requires_grad) axpy(t.ensure_grad(self.b), self.grad, 1.0);
  });
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
  return push(syncdgc::sub(value(a), value(b)), a, b, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    if (t.node(self.a).requires_grad) axpy(t.ensure_grad(self.a), self.grad, 1.0);
    if (t.node(self.b).requires_grad) axpy(t.ensure_grad(self.b), self.grad, -1.0);
  });
}

Tape::NodeId Tape::hadamard(NodeId a, NodeId b) {
  return push(syncdgc::hadamard(value(a), value(b)), a, b, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    if (t.node(self.a).requires_grad) {
      Matrix& ga = t.ensure_grad(self.a);
      const Matrix& bv = t.node(self.b).value;
      for (std::size_t i = 0; i < ga.size(); ++i)
        ga.data()[i] += self.grad.data()[i] * bv.data()[i];
    }
    if (t.node(self.b).requires_grad) {
      Matrix& gb = t.ensure_grad(self.b);
      const Matrix& av = t.node(self.a).value;
      for (std::size_t i = 0; i < gb.size(); ++i)
        gb.data()[i] += self.grad.data()[i] * av.data()[i];
    }
  });
}

Tape::NodeId Tape::scale(NodeId a, double s) {
  return push(syncdgc::scale(value(a), s), a, -1, [s](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    axpy(t.ensure_grad(self.a), self.grad, s);
  });
}

Tape::NodeId Tape::affine(NodeId a, double s, double t0) {
  return push(syncdgc::affine(value(a), s, t0), a, -1, [s](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    axpy(t.ensure_grad(self.a), self.grad, s);
  });
}

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
  return push(syncdgc::matmul(value(a), value(b)), a, b, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    if (t.node(self.a).requires_grad) {
      Matrix da = syncdgc::matmul(self.grad, syncdgc::transpose(t.node(self.b).value));
      axpy(t.ensure_grad(self.a), da, 1.0);
    }
    if (t.node(self.b).requires_grad) {
      Matrix db = syncdgc::matmul(syncdgc::transpose(t.node(self.a).value), self.grad);
      axpy(t.ensure_grad(self.b), db, 1.0);
    }
  });
}

Tape::NodeId Tape::transpose(NodeId a) {
  return push(syncdgc::transpose(value(a)), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    Matrix gt = syncdgc::transpose(self.grad);
    axpy(t.ensure_grad(self.a), gt, 1.0);
  });
}

Tape::NodeId Tape::relu(NodeId a) {
  return push(syncdgc::relu(value(a)), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    Matrix& ga = t.ensure_grad(self.a);
    const Matrix& x = t.node(self.a).value;
    for (std::size_t i = 0; i < ga.size(); ++i)
      if (x.data()[i] > 0.0) ga.data()[i] += self.grad.data()[i];
  });
}

Tape::NodeId Tape::sigmoid(NodeId a) {
  return push(syncdgc::sigmoid(value(a)), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    Matrix& ga = t.ensure_grad(self.a);
    const Matrix& y = self.value;
    for (std::size_t i = 0; i < ga.size(); ++i) {
      const double yv = y.data()[i];
      ga.data()[i] += self.grad.data()[i] * yv * (1.0 - yv);
    }
  });
}

Tape::NodeId Tape::reciprocal1p(NodeId a) {
  const Matrix& x = value(a);
  Matrix y(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) y.data()[i] = 1.0 / (1.0 + x.data()[i]);
  return push(std::move(y), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    Matrix& ga = t.ensure_grad(self.a);
    for (std::size_t i = 0; i < ga.size(); ++i) {
      const double yv = self.value.data()[i];
      ga.data()[i] -= self.grad.data()[i] * yv * yv;
    }
  });
}

Tape::NodeId Tape::row_normalize(NodeId a) {
  const Matrix& x = value(a);
  Matrix y(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i) {
    double r = 0.0;
    for (int j = 0; j < x.cols(); ++j) r += x(i, j);
    if (r == 0.0) throw std::invalid_argument("row_normalize: zero row sum");
    for (int j = 0; j < x.cols(); ++j) y(i, j) = x(i, j) / r;
  }
  return push(std::move(y), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    Matrix& ga = t.ensure_grad(self.a);
    const Matrix& x = t.node(self.a).value;
    const Matrix& y = self.value;
    for (int i = 0; i < x.rows(); ++i) {
      double r = 0.0, dot = 0.0;
      for (int j = 0; j < x.cols(); ++j) {
        r += x(i, j);
        dot += self.grad(i, j) * y(i, j);
      }
      for (int j = 0; j < x.cols(); ++j) ga(i, j) += (self.grad(i, j) - dot) / r;
    }
  });
}

Tape::NodeId Tape::row_l2_normalize(NodeId a) {
  return push(syncdgc::row_l2_normalize(value(a)), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    Matrix& ga = t.ensure_grad(self.a);
    const Matrix& x = t.node(self.a).value;
    const Matrix& y = self.value;
    for (int i = 0; i < x.rows(); ++i) {
      double ss = 0.0, dot = 0.0;
      for (int j = 0; j < x.cols(); ++j) {
        ss += x(i, j) * x(i, j);
        dot += self.grad(i, j) * y(i, j);
      }
      if (ss == 0.0) continue;  // zero rows have zero output and zero slope
      const double inv = 1.0 / std::sqrt(ss);
      for (int j = 0; j < x.cols(); ++j)
        ga(i, j) += (self.grad(i, j) - dot * y(i, j)) * inv;
    }
  });
}

Tape::NodeId Tape::pairwise_sqdist(NodeId z, NodeId mu) {
  return push(syncdgc::pairwise_sqdist(value(z), value(mu)), z, mu, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    const Matrix& zv = t.node(self.a).value;
    const Matrix& mv = t.node(self.b).value;
    const bool needz = t.node(self.a).requires_grad;
    const bool needm = t.node(self.b).requires_grad;
    Matrix* gz = needz ? &t.ensure_grad(self.a) : nullptr;
    Matrix* gm = needm ? &t.ensure_grad(self.b) : nullptr;
    for (int i = 0; i < zv.rows(); ++i)
      for (int j = 0; j < mv.rows(); ++j) {
        const double g2 = 2.0 * self.grad(i, j);
        if (g2 == 0.0) continue;
        for (int l = 0; l < zv.cols(); ++l) {
          const double diff = zv(i, l) - mv(j, l);
          if (needz) (*gz)(i, l) += g2 * diff;
          if (needm) (*gm)(j, l) -= g2 * diff;
        }
      }
  });
}

Tape::NodeId Tape::sum(NodeId a) {
  Matrix y(1, 1);
  y(0, 0) = syncdgc::sum(value(a));
  return push(std::move(y), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    Matrix& ga = t.ensure_grad(self.a);
    const double g = self.grad(0, 0);
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += g;
  });
}

Tape::NodeId Tape::frobenius(NodeId a) {
  Matrix y(1, 1);
  y(0, 0) = frobenius_norm(value(a));
  return push(std::move(y), a, -1, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    const double norm = self.value(0, 0);
    if (norm == 0.0) return;  // gradient defined as 0 at the zero matrix
    Matrix& ga = t.ensure_grad(self.a);
    const Matrix& x = t.node(self.a).value;
    const double g = self.grad(0, 0) / norm;
    for (std::size_t i = 0; i < ga.size(); ++i) ga.data()[i] += g * x.data()[i];
  });
}

Tape::NodeId Tape::mean_bce(NodeId p, NodeId t) {
  Matrix y(1, 1);
  y(0, 0) = elementwise_bce(value(p), value(t));
  return push(std::move(y), p, t, [](Tape& tp, NodeId id) {
    const Node& self = tp.node(id);
    const Matrix& pv = tp.node(self.a).value;
    const Matrix& tv = tp.node(self.b).value;
    const double g = self.grad(0, 0) / double(pv.size());
    if (tp.node(self.a).requires_grad) {
      Matrix& gp = tp.ensure_grad(self.a);
      for (std::size_t i = 0; i < gp.size(); ++i) {
        const double pr = pv.data()[i];
        if (pr <= kBceEps || pr >= 1.0 - kBceEps) continue;  // clamped: flat
        gp.data()[i] += g * (-tv.data()[i] / pr + (1.0 - tv.data()[i]) / (1.0 - pr));
      }
    }
    if (tp.node(self.b).requires_grad) {
      Matrix& gt = tp.ensure_grad(self.b);
      for (std::size_t i = 0; i < gt.size(); ++i) {
        const double pc = std::clamp(pv.data()[i], kBceEps, 1.0 - kBceEps);
        gt.data()[i] += g * (std::log(1.0 - pc) - std::log(pc));
      }
    }
  });
}

Tape::NodeId Tape::categorical_ce(NodeId p, NodeId q) {
  const Matrix& pv = value(p);
  const Matrix& qv = value(q);
  if (!pv.same_shape(qv))
    throw std::invalid_argument("categorical_ce: shape mismatch " + pv.shape_str() +
                                " vs " + qv.shape_str());
  Matrix y(1, 1);
  double s = 0.0;
  for (std::size_t i = 0; i < qv.size(); ++i)
    s -= pv.data()[i] * std::log(std::max(qv.data()[i], kCeEps));
  y(0, 0) = s / double(qv.rows());
  return push(std::move(y), p, q, [](Tape& t, NodeId id) {
    const Node& self = t.node(id);
    const Matrix& pv = t.node(self.a).value;
    const Matrix& qv = t.node(self.b).value;
    const double g = self.grad(0, 0) / double(qv.rows());
    if (t.node(self.a).requires_grad) {
      Matrix& gp = t.ensure_grad(self.a);
      for (std::size_t i = 0; i < gp.size(); ++i)
        gp.data()[i] -= g * std::log(std::max(qv.data()[i], kCeEps));
    }
    if (t.node(self.b).requires_grad) {
      Matrix& gq = t.ensure_grad(self.b);
      for (std::size_t i = 0; i < gq.size(); ++i) {
        if (qv.data()[i] <= kCeEps) continue;  // clamped: flat
        gq.data()[i] -= g * pv.data()[i] / qv.data()[i];
      }
    }
  });
}

}  // namespace syncdgc
