#include "syncdgc/clustering.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace syncdgc {

namespace {

constexpr int kRestarts = 20;
constexpr int kMaxIters = 300;

double sqdist_rows(const Matrix& a, int i, const Matrix& b, int j) {
  double s = 0.0;
  for (int l = 0; l < a.cols(); ++l) {
    const double d = a(i, l) - b(j, l);
    s += d * d;
  }
  return s;
}

Matrix seed_plus_plus(const Matrix& z, int k, Rng& rng) {
  const int n = z.rows();
  Matrix centers(k, z.cols());
  std::vector<int> chosen;
  chosen.push_back(int(rng.index(std::uint64_t(n))));
  std::vector<double> d2(n);
  for (int c = 0; c < k; ++c) {
    const int idx = chosen.back();
    for (int l = 0; l < z.cols(); ++l) centers(c, l) = z(idx, l);
    if (c + 1 == k) break;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (int cc = 0; cc <= c; ++cc) best = std::min(best, sqdist_rows(z, i, centers, cc));
      d2[i] = best;
      total += best;
    }
    int next;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cum = 0.0;
      next = n - 1;
      for (int i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > target) {
          next = i;
          break;
        }
      }
    } else {
      next = int(rng.index(std::uint64_t(n)));  // all points coincide with a center
    }
    chosen.push_back(next);
  }
  return centers;
}

double lloyd(const Matrix& z, Matrix& centers, std::vector<int>& labels) {
  const int n = z.rows();
  const int k = centers.rows();
  labels.assign(n, 0);
  std::vector<int> counts(k);
  for (int iter = 0; iter < kMaxIters; ++iter) {
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double best_d = sqdist_rows(z, i, centers, 0);
      for (int c = 1; c < k; ++c) {
        const double d = sqdist_rows(z, i, centers, c);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      if (labels[i] != best) {
        labels[i] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    Matrix sums(k, z.cols());
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) {
      ++counts[labels[i]];
      for (int l = 0; l < z.cols(); ++l) sums(labels[i], l) += z(i, l);
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (int l = 0; l < z.cols(); ++l) centers(c, l) = sums(c, l) / counts[c];
      } else {
        // Re-seed to the point farthest from its own center.
        int far = 0;
        double far_d = -1.0;
        for (int i = 0; i < n; ++i) {
          const double d = sqdist_rows(z, i, centers, labels[i]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        for (int l = 0; l < z.cols(); ++l) centers(c, l) = z(far, l);
      }
    }
  }
  double inertia = 0.0;
  for (int i = 0; i < n; ++i) inertia += sqdist_rows(z, i, centers, labels[i]);
  return inertia;
}

}  // namespace

KmeansResult kmeans(const Matrix& z, int k, Rng& rng) {
  const int n = z.rows();
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (k > n)
    throw std::invalid_argument("kmeans: k=" + std::to_string(k) + " exceeds " +
                                std::to_string(n) + " points");
  KmeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < kRestarts; ++r) {
    Matrix centers = seed_plus_plus(z, k, rng);
    std::vector<int> labels;
    const double inertia = lloyd(z, centers, labels);
    if (inertia < best.inertia) {
      best.centers = std::move(centers);
      best.labels = std::move(labels);
      best.inertia = inertia;
    }
  }
  return best;
}

Matrix soft_assign(const Matrix& z, const Matrix& centers) {
  if (z.cols() != centers.cols())
    throw std::invalid_argument("soft_assign: embedding dim " + std::to_string(z.cols()) +
                                " vs center dim " + std::to_string(centers.cols()));
  Matrix q(z.rows(), centers.rows());
  for (int i = 0; i < z.rows(); ++i) {
    double row = 0.0;
    for (int j = 0; j < centers.rows(); ++j) {
      q(i, j) = 1.0 / (1.0 + sqdist_rows(z, i, centers, j));
      row += q(i, j);
    }
    for (int j = 0; j < centers.rows(); ++j) q(i, j) /= row;
  }
  return q;
}

Tape::NodeId soft_assign_on_tape(Tape& tape, Tape::NodeId z, Tape::NodeId centers) {
  return tape.row_normalize(tape.reciprocal1p(tape.pairwise_sqdist(z, centers)));
}

Matrix target_distribution(const Matrix& q) {
  const int n = q.rows(), k = q.cols();
  std::vector<double> freq(k, 0.0);
  for (int j = 0; j < k; ++j)
    for (int i = 0; i < n; ++i) freq[j] += q(i, j);
  Matrix p(n, k);
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < k; ++j) {
      p(i, j) = freq[j] > 0.0 ? q(i, j) * q(i, j) / freq[j] : 0.0;
      row += p(i, j);
    }
    if (row > 0.0)
      for (int j = 0; j < k; ++j) p(i, j) /= row;
  }
  return p;
}

double clustering_loss(const Matrix& q, const Matrix& p) {
  if (!q.same_shape(p))
    throw std::invalid_argument("clustering_loss: shape mismatch " + q.shape_str() + " vs " +
                                p.shape_str());
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    s -= p.data()[i] * std::log(std::max(q.data()[i], kCeEps));
  return s / double(q.rows());
}

double total_loss(const Matrix& a_hat, const Matrix& a_s, const Matrix& q, const Matrix& p,
                  double beta) {
  if (!a_hat.same_shape(a_s))
    throw std::invalid_argument("total_loss: shape mismatch " + a_hat.shape_str() + " vs " +
                                a_s.shape_str());
  double loss = frobenius_norm(sub(a_hat, a_s)) / double(a_hat.rows());
  if (beta != 0.0) loss += beta * clustering_loss(q, p);
  return loss;
}

std::vector<int> hard_labels(const Matrix& q) {
  std::vector<int> labels(q.rows());
  for (int i = 0; i < q.rows(); ++i) {
    int best = 0;
    for (int j = 1; j < q.cols(); ++j)
      if (q(i, j) > q(i, best)) best = j;
    labels[i] = best;
  }
  return labels;
}

}  // namespace syncdgc
