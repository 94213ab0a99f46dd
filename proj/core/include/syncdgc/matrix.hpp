#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace syncdgc {

// Dense row-major matrix of doubles. All math entry points validate shapes
// and throw std::invalid_argument naming both operands on mismatch.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols);  // zero-initialized
  Matrix(int rows, int cols, double fill);

  static Matrix identity(int n);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
  std::string shape_str() const;  // e.g. "3x4"
  bool all_finite() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

// Worker-thread cap for the matmul kernel. Results are identical for any
// thread count; the default is 1 (see SYNC_THREADS in the CLI).
void set_max_threads(int n);
int max_threads();

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix hadamard(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix affine(const Matrix& a, double s, double t);  // s*x + t elementwise
Matrix relu(const Matrix& a);
Matrix sigmoid(const Matrix& a);
Matrix clamp(const Matrix& a, double lo, double hi);

double sum(const Matrix& a);
double frobenius_norm(const Matrix& a);
double max_abs_diff(const Matrix& a, const Matrix& b);

// Probabilities are clamped to [kBceEps, 1-kBceEps] before the logs.
inline constexpr double kBceEps = 1e-7;
double elementwise_bce(const Matrix& p, const Matrix& t);  // mean over entries

// Rows scaled to unit L2 norm; all-zero rows stay zero.
Matrix row_l2_normalize(const Matrix& a);

// Squared Euclidean distances between rows of z (n x d) and rows of mu (k x d).
Matrix pairwise_sqdist(const Matrix& z, const Matrix& mu);

// Largest singular value via power iteration on A^T A (deterministic start).
double spectral_norm(const Matrix& a, int iters = 200);

}  // namespace syncdgc
