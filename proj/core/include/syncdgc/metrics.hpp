#pragma once

#include <vector>

namespace syncdgc {

// counts(t, p) = how many points have true label t and predicted label p.
struct ContingencyTable {
  std::vector<std::vector<long long>> counts;  // k_true × k_pred
  long long n = 0;

  int k_true() const { return int(counts.size()); }
  int k_pred() const { return counts.empty() ? 0 : int(counts[0].size()); }
};

ContingencyTable contingency(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Optimal one-to-one map from predicted cluster id to true class id (padded
// ids >= k_true mean "matched to nothing"). Among all maximizing assignments
// the lexicographically smallest is returned, so downstream metrics are
// deterministic under ties.
std::vector<int> align_clusters(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Fraction correct under the best cluster-to-class assignment.
double accuracy(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Mutual information normalized by the geometric mean of the entropies.
// Both entropies zero → 1; exactly one zero → 0.
double nmi(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Adjusted Rand index; degenerate denominator → 1.
double ari(const std::vector<int>& y_true, const std::vector<int>& y_pred);

// Unweighted mean F1 over the classes present in y_true, with predictions
// relabeled by align_clusters. Classes no cluster maps to contribute 0.
double macro_f1(const std::vector<int>& y_true, const std::vector<int>& y_pred);

}  // namespace syncdgc
