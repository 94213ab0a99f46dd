#include "syncdgc/matrix.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace syncdgc {

namespace {

std::atomic<int> g_max_threads{1};

[[noreturn]] void throw_shape(const char* op, const Matrix& a, const Matrix& b) {
  throw std::invalid_argument(std::string(op) + ": shape mismatch " + a.shape_str() +
                              " vs " + b.shape_str());
}

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw_shape(op, a, b);
}

}  // namespace

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative dimension");
  data_.assign(std::size_t(rows) * cols, 0.0);
}

Matrix::Matrix(int rows, int cols, double fill) : Matrix(rows, cols) {
  std::fill(data_.begin(), data_.end(), fill);
}

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const int r = int(rows.size());
  const int c = r > 0 ? int(rows.begin()->size()) : 0;
  Matrix m(r, c);
  int i = 0;
  for (const auto& row : rows) {
    if (int(row.size()) != c) throw std::invalid_argument("from_rows: ragged rows");
    int j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::string Matrix::shape_str() const {
  return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

void set_max_threads(int n) { g_max_threads.store(n > 0 ? n : 1); }
int max_threads() { return g_max_threads.load(); }

namespace {

// Row-block kernel: each output element accumulates in a fixed order, so the
// result is identical for any thread count. Exact zeros in `a` are skipped;
// that never changes a sum and pays off on the sparse propagation matrices.
void matmul_rows(const double* a, const double* b, double* c, int i0, int i1,
                 int inner, int m) {
  for (int i = i0; i < i1; ++i) {
    const double* ai = a + std::size_t(i) * inner;
    double* ci = c + std::size_t(i) * m;
    for (int l = 0; l < inner; ++l) {
      const double av = ai[l];
      if (av == 0.0) continue;
      const double* bl = b + std::size_t(l) * m;
      for (int j = 0; j < m; ++j) ci[j] += av * bl[j];
    }
  }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw_shape("matmul", a, b);
  const int n = a.rows(), inner = a.cols(), m = b.cols();
  Matrix c(n, m);
  const int threads = std::min<int>(max_threads(), std::max(1, n / 16));
  if (threads <= 1 || double(n) * inner * m < 1e6) {
    matmul_rows(a.data(), b.data(), c.data(), 0, n, inner, m);
    return c;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int i0 = t * chunk, i1 = std::min(n, i0 + chunk);
    if (i0 >= i1) break;
    pool.emplace_back(matmul_rows, a.data(), b.data(), c.data(), i0, i1, inner, m);
  }
  for (auto& th : pool) th.join();
  return c;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape("add", a, b);
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] + b.data()[i];
  return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape("sub", a, b);
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] - b.data()[i];
  return c;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape("hadamard", a, b);
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] * b.data()[i];
  return c;
}

Matrix scale(const Matrix& a, double s) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = s * a.data()[i];
  return c;
}

Matrix affine(const Matrix& a, double s, double t) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = s * a.data()[i] + t;
  return c;
}

Matrix relu(const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = a.data()[i] > 0.0 ? a.data()[i] : 0.0;
  return c;
}

Matrix sigmoid(const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a.data()[i];
    if (x >= 0.0) {
      c.data()[i] = 1.0 / (1.0 + std::exp(-x));
    } else {
      const double e = std::exp(x);
      c.data()[i] = e / (1.0 + e);
    }
  }
  return c;
}

Matrix clamp(const Matrix& a, double lo, double hi) {
  Matrix c(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.size(); ++i) c.data()[i] = std::clamp(a.data()[i], lo, hi);
  return c;
}

double sum(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i];
  return s;
}

double frobenius_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
  return std::sqrt(s);
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape("max_abs_diff", a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double elementwise_bce(const Matrix& p, const Matrix& t) {
  require_same_shape("elementwise_bce", p, t);
  if (p.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double pc = std::clamp(p.data()[i], kBceEps, 1.0 - kBceEps);
    const double tv = t.data()[i];
    s += -(tv * std::log(pc) + (1.0 - tv) * std::log(1.0 - pc));
  }
  return s / double(p.size());
}

Matrix row_l2_normalize(const Matrix& a) {
  Matrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i) {
    double ss = 0.0;
    for (int j = 0; j < a.cols(); ++j) ss += a(i, j) * a(i, j);
    if (ss == 0.0) continue;
    const double inv = 1.0 / std::sqrt(ss);
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * inv;
  }
  return c;
}

Matrix pairwise_sqdist(const Matrix& z, const Matrix& mu) {
  if (z.cols() != mu.cols()) throw_shape("pairwise_sqdist", z, mu);
  Matrix d(z.rows(), mu.rows());
  for (int i = 0; i < z.rows(); ++i)
    for (int j = 0; j < mu.rows(); ++j) {
      double s = 0.0;
      for (int l = 0; l < z.cols(); ++l) {
        const double diff = z(i, l) - mu(j, l);
        s += diff * diff;
      }
      d(i, j) = s;
    }
  return d;
}

double spectral_norm(const Matrix& a, int iters) {
  if (a.empty()) return 0.0;
  Matrix v(a.cols(), 1, 1.0 / std::sqrt(double(a.cols())));
  const Matrix at = transpose(a);
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    Matrix u = matmul(a, v);
    sigma = frobenius_norm(u);
    if (sigma == 0.0) return 0.0;
    Matrix w = matmul(at, u);
    const double wn = frobenius_norm(w);
    if (wn == 0.0) return sigma;
    v = scale(w, 1.0 / wn);
  }
  return frobenius_norm(matmul(a, v));
}

}  // namespace syncdgc
