#include "syncdgc/structure.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "syncdgc/graph.hpp"

namespace syncdgc {

Matrix fuse_probability(const Matrix& a_hat_p, const Matrix& s_xp) {
  if (!a_hat_p.same_shape(s_xp))
    throw std::invalid_argument("fuse_probability: shape mismatch " + a_hat_p.shape_str() +
                                " vs " + s_xp.shape_str());
  Matrix out(a_hat_p.rows(), a_hat_p.cols());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = 0.5 * (a_hat_p.data()[i] + s_xp.data()[i]);
    out.data()[i] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
  }
  return out;
}

LinkResult add_links(const Matrix& p_prime, const Matrix& a_tilde) {
  if (!p_prime.same_shape(a_tilde))
    throw std::invalid_argument("add_links: shape mismatch " + p_prime.shape_str() + " vs " +
                                a_tilde.shape_str());
  const int n = p_prime.rows();
  LinkResult r{Matrix(n, n), a_tilde};
  for (int i = 0; i < n; ++i) {
    int best = -1;
    double best_v = 0.0;  // a link needs a strictly positive residual
    for (int j = 0; j < n; ++j) {
      const double res = p_prime(i, j) * (1.0 - a_tilde(i, j));
      if (res > best_v) {
        best_v = res;
        best = j;
      }
    }
    if (best >= 0) {
      r.a_add(i, best) = 1.0;
      r.a_add(best, i) = 1.0;
    }
  }
  for (std::size_t i = 0; i < r.a_mask.size(); ++i) {
    const double v = r.a_mask.data()[i] + r.a_add.data()[i];
    r.a_mask.data()[i] = v > 1.0 ? 1.0 : v;
  }
  return r;
}

Matrix bernoulli_sample(const Matrix& p_prime, const Matrix& a_mask, Rng& rng) {
  if (!p_prime.same_shape(a_mask))
    throw std::invalid_argument("bernoulli_sample: shape mismatch " + p_prime.shape_str() +
                                " vs " + a_mask.shape_str());
  Matrix out(p_prime.rows(), p_prime.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = rng.bernoulli(p_prime.data()[i] * a_mask.data()[i]) ? 1.0 : 0.0;
  return out;
}

Matrix symmetrize_penalty(const Matrix& a_s) {
  if (a_s.rows() != a_s.cols())
    throw std::invalid_argument("symmetrize_penalty: matrix is " + a_s.shape_str());
  Matrix out(a_s.rows(), a_s.cols());
  for (int i = 0; i < a_s.rows(); ++i)
    for (int j = 0; j < a_s.cols(); ++j) out(i, j) = 0.5 * (a_s(i, j) + a_s(j, i));
  return out;
}

Matrix edge_importance(const Matrix& a_s) {
  const int n = a_s.rows();
  if (a_s.cols() != n)
    throw std::invalid_argument("edge_importance: matrix is " + a_s.shape_str());
  // Sparse pass: degrees, then per-row scaled entries, then row L2 norms.
  struct Entry {
    int i, j;
    double v;
  };
  std::vector<Entry> entries;
  std::vector<double> deg(n, 1.0);  // self-loop contribution
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (a_s(i, j) != 0.0) {
        deg[i] += a_s(i, j);
        entries.push_back({i, j, 0.0});
      }
  std::vector<double> row_ss(n, 0.0);
  for (Entry& e : entries) {
    e.v = deg[e.i] * a_s(e.i, e.j) * deg[e.j];
    row_ss[e.i] += e.v * e.v;
  }
  Matrix m(n, n);
  for (const Entry& e : entries)
    if (row_ss[e.i] > 0.0) m(e.i, e.j) = e.v / std::sqrt(row_ss[e.i]);
  return symmetrize_penalty(m);
}

RefinedGraph refine(const Matrix& a_hat_p, const Matrix& x_p, const Matrix& a_tilde, Rng& rng,
                    const SfSwitches& switches, Similarity sim) {
  const Matrix s_xp =
      sim == Similarity::kPearson ? pearson_similarity(x_p) : cosine_similarity(x_p);
  const Matrix p_prime = fuse_probability(a_hat_p, s_xp);

  RefinedGraph out;
  Matrix a_mask;
  if (switches.link) {
    LinkResult lr = add_links(p_prime, a_tilde);
    out.added_mask = std::move(lr.a_add);
    a_mask = std::move(lr.a_mask);
  } else {
    out.added_mask = Matrix(a_tilde.rows(), a_tilde.cols());
    a_mask = a_tilde;
  }

  Matrix sampled = switches.pruning ? bernoulli_sample(p_prime, a_mask, rng) : a_mask;
  out.a_s = symmetrize_penalty(sampled);

  if (switches.weighting) {
    const Matrix m_e = edge_importance(out.a_s);
    Matrix m(a_hat_p.rows(), a_hat_p.cols());
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double v = (a_hat_p.data()[i] + s_xp.data()[i] + m_e.data()[i]) / 3.0;
      m.data()[i] = v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v);
    }
    out.confidence = std::move(m);
    out.a_p = hadamard(out.confidence, out.a_s);
  } else {
    out.confidence = Matrix(a_hat_p.rows(), a_hat_p.cols(), 1.0);
    out.a_p = out.a_s;
  }
  return out;
}

}  // namespace syncdgc
