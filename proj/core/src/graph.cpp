#include "syncdgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace syncdgc {

namespace {
constexpr double kSymTol = 1e-12;
}

int Graph::num_classes() const {
  int k = 0;
  for (int y : labels) k = std::max(k, y + 1);
  return k;
}

void validate_graph(const Graph& g) {
  const Matrix& a = g.adjacency;
  if (a.rows() != a.cols())
    throw std::invalid_argument("graph: adjacency is " + a.shape_str() + ", expected square");
  for (int i = 0; i < a.rows(); ++i) {
    if (a(i, i) != 0.0)
      throw std::invalid_argument("graph: nonzero diagonal at node " + std::to_string(i));
    for (int j = i + 1; j < a.cols(); ++j) {
      if (a(i, j) < 0.0 || a(j, i) < 0.0)
        throw std::invalid_argument("graph: negative adjacency entry");
      if (std::fabs(a(i, j) - a(j, i)) > kSymTol)
        throw std::invalid_argument("graph: adjacency asymmetric at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
    }
  }
  if (g.features.rows() != a.rows())
    throw std::invalid_argument("graph: features have " + std::to_string(g.features.rows()) +
                                " rows for " + std::to_string(a.rows()) + " nodes");
  if (!g.labels.empty()) {
    if (int(g.labels.size()) != a.rows())
      throw std::invalid_argument("graph: label count mismatch");
    for (int y : g.labels)
      if (y < 0) throw std::invalid_argument("graph: negative label");
  }
}

Matrix with_self_loops(const Matrix& adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw std::invalid_argument("with_self_loops: adjacency is " + adjacency.shape_str());
  Matrix out = adjacency;
  for (int i = 0; i < out.rows(); ++i) out(i, i) += 1.0;
  return out;
}

Matrix normalize(const Matrix& adjacency) {
  const int n = adjacency.rows();
  if (adjacency.cols() != n)
    throw std::invalid_argument("normalize: adjacency is " + adjacency.shape_str());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::fabs(adjacency(i, j) - adjacency(j, i)) > kSymTol)
        throw std::invalid_argument("normalize: adjacency asymmetric at (" + std::to_string(i) +
                                    "," + std::to_string(j) + ")");
  Matrix a_tilde = adjacency;
  for (int i = 0; i < n; ++i) a_tilde(i, i) += 1.0;
  std::vector<double> inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    double deg = 0.0;
    for (int j = 0; j < n; ++j) deg += a_tilde(i, j);
    inv_sqrt[i] = 1.0 / std::sqrt(deg);  // deg ≥ 1 thanks to the self-loop
  }
  Matrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = inv_sqrt[i] * a_tilde(i, j) * inv_sqrt[j];
  return out;
}

Matrix cosine_similarity(const Matrix& x) {
  const int n = x.rows();
  std::vector<double> norm(n);
  for (int i = 0; i < n; ++i) {
    double ss = 0.0;
    for (int j = 0; j < x.cols(); ++j) ss += x(i, j) * x(i, j);
    norm[i] = std::sqrt(ss);
  }
  Matrix s(n, n);
  for (int i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double v = 0.0;
      if (norm[i] > 0.0 && norm[j] > 0.0) {
        double dot = 0.0;
        for (int l = 0; l < x.cols(); ++l) dot += x(i, l) * x(j, l);
        v = std::clamp(dot / (norm[i] * norm[j]), -1.0, 1.0);
      }
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

Matrix pearson_similarity(const Matrix& x) {
  Matrix centered = x;
  for (int i = 0; i < x.rows(); ++i) {
    double mean = 0.0;
    for (int j = 0; j < x.cols(); ++j) mean += x(i, j);
    mean /= double(x.cols());
    for (int j = 0; j < x.cols(); ++j) centered(i, j) -= mean;
  }
  return cosine_similarity(centered);
}

double homophily_ratio(const Graph& g) {
  if (!g.has_labels()) throw std::invalid_argument("homophily_ratio: graph has no labels");
  long long edges = 0, same = 0;
  const Matrix& a = g.adjacency;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j)
      if (a(i, j) > 0.0) {
        ++edges;
        if (g.labels[i] == g.labels[j]) ++same;
      }
  if (edges == 0) return 0.0;
  return double(same) / double(edges);
}

double dirichlet_energy(const Graph& g, const Matrix& f) {
  const Matrix& a = g.adjacency;
  if (f.rows() != a.rows())
    throw std::invalid_argument("dirichlet_energy: signal has " + std::to_string(f.rows()) +
                                " rows for " + std::to_string(a.rows()) + " nodes");
  const int n = a.rows();
  Matrix lap(n, n);
  for (int i = 0; i < n; ++i) {
    double deg = 0.0;
    for (int j = 0; j < n; ++j) {
      deg += a(i, j);
      lap(i, j) = -a(i, j);
    }
    lap(i, i) += deg;
  }
  Matrix lf = matmul(lap, f);
  double tr = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) tr += f.data()[i] * lf.data()[i];
  return 0.5 * tr;
}

}  // namespace syncdgc
