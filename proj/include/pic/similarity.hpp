#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "pic/common.hpp"

namespace pic {

// Squared Euclidean distances from one instance to every other instance of a
// view. Entries for instances missing from the view are undefined.
struct DistanceRow {
  Vector d;
  BoolVector defined;
};

struct NeighborWeight {
  Index index;
  double weight;
};

// Per-view similarity with explicit undefined entries: an entry (i, j) is
// defined iff both instances are observed in the view.
struct MaskedSimilarity {
  Matrix values;
  BoolMatrix defined;
  Index view_id = 0;
};

inline DistanceRow distance_row(const Matrix& x, const BoolVector& observed, Index i) {
  if (observed.size() != x.cols()) throw DataError("observation mask length does not match view");
  if (i < 0 || i >= x.cols() || !observed(i)) {
    throw DataError("instance " + std::to_string(i) + " is not observed in this view");
  }
  const Index n = x.cols();
  DistanceRow row{Vector::Zero(n), observed};
  for (Index j = 0; j < n; ++j) {
    if (observed(j)) row.d(j) = (x.col(j) - x.col(i)).squaredNorm();
  }
  row.d(i) = 0.0;
  return row;
}

// Closed-form minimizer of ||a + d / (2 alpha)||^2 over the simplex restricted
// to defined non-self entries, with alpha chosen per row so that exactly k_nn
// weights are positive:
//   a_(h) = (d_(k+1) - d_(h)) / (k d_(k+1) - sum_{h<=k} d_(h)),  h <= k.
// k_nn is lowered to (available - 1) when fewer than k_nn + 1 candidates exist.
// If the denominator vanishes (ties through position k+1) the k nearest share
// the weight uniformly. Returned weights are ordered by increasing distance.
inline std::vector<NeighborWeight> adaptive_row(const DistanceRow& row, Index self, Index k_nn) {
  if (k_nn < 1) throw UsageError("k_nn must be at least 1");
  std::vector<Index> candidates;
  for (Index j = 0; j < row.d.size(); ++j) {
    if (j != self && row.defined(j)) candidates.push_back(j);
  }
  if (candidates.empty()) {
    throw DataError("instance " + std::to_string(self) + " has no observed neighbor in its view");
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](Index a, Index b) { return row.d(a) < row.d(b); });

  const Index available = Index(candidates.size());
  if (available == 1) return {{candidates.front(), 1.0}};
  const Index k = std::min(k_nn, available - 1);

  const double next = row.d(candidates[k]);
  double head = 0.0;
  for (Index h = 0; h < k; ++h) head += row.d(candidates[h]);
  const double denom = double(k) * next - head;

  std::vector<NeighborWeight> out;
  out.reserve(std::size_t(k));
  if (!(denom > 1e-14 * std::max(1.0, double(k) * next))) {
    for (Index h = 0; h < k; ++h) out.push_back({candidates[h], 1.0 / double(k)});
    return out;
  }
  for (Index h = 0; h < k; ++h) {
    out.push_back({candidates[h], std::clamp((next - row.d(candidates[h])) / denom, 0.0, 1.0)});
  }
  return out;
}

// Row-regularization weight implied by adaptive_row for this row; 0 when the
// row is degenerate or has a single candidate.
inline double adaptive_alpha(const DistanceRow& row, Index self, Index k_nn) {
  std::vector<double> d;
  for (Index j = 0; j < row.d.size(); ++j) {
    if (j != self && row.defined(j)) d.push_back(row.d(j));
  }
  if (d.size() < 2) return 0.0;
  std::sort(d.begin(), d.end());
  const Index k = std::min<Index>(k_nn, Index(d.size()) - 1);
  const double head = std::accumulate(d.begin(), d.begin() + k, 0.0);
  return 0.5 * (double(k) * d[std::size_t(k)] - head);
}

inline MaskedSimilarity build_similarity(const Matrix& x, const BoolVector& observed, Index k_nn,
                                         Index view_id = 0) {
  if (observed.size() != x.cols()) throw DataError("observation mask length does not match view");
  if (observed.count() < 2) {
    throw DataError("view " + std::to_string(view_id) + " has fewer than 2 observed instances");
  }
  const Index n = x.cols();
  MaskedSimilarity sim{Matrix::Zero(n, n), BoolMatrix::Constant(n, n, false), view_id};
  for (Index i = 0; i < n; ++i) {
    if (!observed(i)) continue;
    for (Index j = 0; j < n; ++j) sim.defined(i, j) = observed(j);
    const auto row = distance_row(x, observed, i);
    for (const auto& [j, w] : adaptive_row(row, i, k_nn)) sim.values(i, j) = w;
  }
  return sim;
}

}  // namespace pic
