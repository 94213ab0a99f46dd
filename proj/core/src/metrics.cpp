#include "syncdgc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace syncdgc {

namespace {

constexpr long long kInf = std::numeric_limits<long long>::max() / 4;

void check_labels(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  if (y_true.size() != y_pred.size())
    throw std::invalid_argument("metrics: " + std::to_string(y_true.size()) + " true vs " +
                                std::to_string(y_pred.size()) + " predicted labels");
  if (y_true.empty()) throw std::invalid_argument("metrics: empty label vectors");
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (y_true[i] < 0 || y_pred[i] < 0)
      throw std::invalid_argument("metrics: negative label at index " + std::to_string(i));
}

// Exact min-cost perfect assignment via potentials; returns row-of-column.
std::vector<int> min_cost_assignment(const std::vector<std::vector<long long>>& cost) {
  const int n = int(cost.size());
  std::vector<long long> u(n + 1), v(n + 1);
  std::vector<int> p(n + 1), way(n + 1);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<long long> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      long long delta = kInf;
      for (int j = 1; j <= n; ++j)
        if (!used[j]) {
          const long long cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
          if (cur < minv[j]) {
            minv[j] = cur;
            way[j] = j0;
          }
          if (minv[j] < delta) {
            delta = minv[j];
            j1 = j;
          }
        }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_of_col(n);
  for (int j = 1; j <= n; ++j) row_of_col[j - 1] = p[j] - 1;
  return row_of_col;
}

// Benefit of the best assignment that respects fixed[col] (−1 = free).
long long best_value_with_fixed(const std::vector<std::vector<long long>>& benefit,
                                const std::vector<int>& fixed) {
  const int n = int(benefit.size());
  long long base = 0;
  std::vector<int> free_cols, free_rows;
  std::vector<char> row_taken(n, 0);
  for (int j = 0; j < n; ++j) {
    if (fixed[j] >= 0) {
      base += benefit[fixed[j]][j];
      row_taken[fixed[j]] = 1;
    } else {
      free_cols.push_back(j);
    }
  }
  for (int i = 0; i < n; ++i)
    if (!row_taken[i]) free_rows.push_back(i);
  if (free_cols.empty()) return base;
  const int m = int(free_cols.size());
  std::vector<std::vector<long long>> cost(m, std::vector<long long>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) cost[a][b] = -benefit[free_rows[a]][free_cols[b]];
  const std::vector<int> row_of_col = min_cost_assignment(cost);
  for (int b = 0; b < m; ++b) base += benefit[free_rows[row_of_col[b]]][free_cols[b]];
  return base;
}

// Lexicographically smallest benefit-maximizing column→row map.
std::vector<int> canonical_max_assignment(const std::vector<std::vector<long long>>& benefit) {
  const int n = int(benefit.size());
  std::vector<int> fixed(n, -1);
  const long long best = best_value_with_fixed(benefit, fixed);
  std::vector<char> row_used(n, 0);
  for (int j = 0; j < n; ++j) {
    for (int r = 0; r < n; ++r) {
      if (row_used[r]) continue;
      fixed[j] = r;
      if (best_value_with_fixed(benefit, fixed) == best) {
        row_used[r] = 1;
        break;
      }
      fixed[j] = -1;
    }
  }
  return fixed;
}

double log_or_zero(double x) { return x > 0.0 ? std::log(x) : 0.0; }

long long pairs(long long c) { return c * (c - 1) / 2; }

}  // namespace

ContingencyTable contingency(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  check_labels(y_true, y_pred);
  int kt = 0, kp = 0;
  for (int y : y_true) kt = std::max(kt, y + 1);
  for (int y : y_pred) kp = std::max(kp, y + 1);
  ContingencyTable ct;
  ct.counts.assign(kt, std::vector<long long>(kp, 0));
  ct.n = (long long)(y_true.size());
  for (std::size_t i = 0; i < y_true.size(); ++i) ++ct.counts[y_true[i]][y_pred[i]];
  return ct;
}

std::vector<int> align_clusters(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  const ContingencyTable ct = contingency(y_true, y_pred);
  const int k = std::max(ct.k_true(), ct.k_pred());
  std::vector<std::vector<long long>> benefit(k, std::vector<long long>(k, 0));
  for (int t = 0; t < ct.k_true(); ++t)
    for (int p = 0; p < ct.k_pred(); ++p) benefit[t][p] = ct.counts[t][p];
  std::vector<int> map = canonical_max_assignment(benefit);
  map.resize(ct.k_pred());
  return map;
}

double accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  const std::vector<int> map = align_clusters(y_true, y_pred);
  long long hit = 0;
  for (std::size_t i = 0; i < y_true.size(); ++i)
    if (map[y_pred[i]] == y_true[i]) ++hit;
  return double(hit) / double(y_true.size());
}

double nmi(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  const ContingencyTable ct = contingency(y_true, y_pred);
  const double n = double(ct.n);
  std::vector<long long> row(ct.k_true(), 0), col(ct.k_pred(), 0);
  for (int t = 0; t < ct.k_true(); ++t)
    for (int p = 0; p < ct.k_pred(); ++p) {
      row[t] += ct.counts[t][p];
      col[p] += ct.counts[t][p];
    }
  double hu = 0.0, hv = 0.0;
  for (long long r : row)
    if (r > 0) hu -= (r / n) * std::log(r / n);
  for (long long c : col)
    if (c > 0) hv -= (c / n) * std::log(c / n);
  if (hu == 0.0 && hv == 0.0) return 1.0;  // both single-cluster ⇒ identical partitions
  if (hu == 0.0 || hv == 0.0) return 0.0;
  double mi = 0.0;
  for (int t = 0; t < ct.k_true(); ++t)
    for (int p = 0; p < ct.k_pred(); ++p) {
      const long long c = ct.counts[t][p];
      if (c > 0) mi += (c / n) * log_or_zero(n * double(c) / (double(row[t]) * double(col[p])));
    }
  const double v = mi / std::sqrt(hu * hv);
  return v > 1.0 ? 1.0 : (v < 0.0 ? 0.0 : v);
}

double ari(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  const ContingencyTable ct = contingency(y_true, y_pred);
  std::vector<long long> row(ct.k_true(), 0), col(ct.k_pred(), 0);
  long long index = 0;
  for (int t = 0; t < ct.k_true(); ++t)
    for (int p = 0; p < ct.k_pred(); ++p) {
      row[t] += ct.counts[t][p];
      col[p] += ct.counts[t][p];
      index += pairs(ct.counts[t][p]);
    }
  long long sum_row = 0, sum_col = 0;
  for (long long r : row) sum_row += pairs(r);
  for (long long c : col) sum_col += pairs(c);
  const double total = double(pairs(ct.n));
  const double expected = double(sum_row) * double(sum_col) / total;
  const double max_index = 0.5 * double(sum_row + sum_col);
  if (max_index == expected) return 1.0;
  return (double(index) - expected) / (max_index - expected);
}

double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
  const std::vector<int> map = align_clusters(y_true, y_pred);
  int kt = 0;
  for (int y : y_true) kt = std::max(kt, y + 1);
  std::vector<long long> tp(kt, 0), fp(kt, 0), fn(kt, 0);
  std::vector<char> present(kt, 0);
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    present[y_true[i]] = 1;
    const int pred = map[y_pred[i]];
    if (pred == y_true[i]) {
      ++tp[y_true[i]];
    } else {
      if (pred < kt) ++fp[pred];
      ++fn[y_true[i]];
    }
  }
  double sum = 0.0;
  int classes = 0;
  for (int t = 0; t < kt; ++t) {
    if (!present[t]) continue;
    ++classes;
    const double denom_p = double(tp[t] + fp[t]);
    const double denom_r = double(tp[t] + fn[t]);
    const double prec = denom_p > 0.0 ? tp[t] / denom_p : 0.0;
    const double rec = denom_r > 0.0 ? tp[t] / denom_r : 0.0;
    if (prec + rec > 0.0) sum += 2.0 * prec * rec / (prec + rec);
  }
  return sum / double(classes);
}

}  // namespace syncdgc
