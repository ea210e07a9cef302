#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "pic/common.hpp"

namespace pic {

struct Score {
  double acc = 0.0;
  double nmi = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix (Hungarian method with
// row/column potentials). Returns assignment[row] = column.
inline std::vector<int> hungarian(const Matrix& cost) {
  const int n = int(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(std::size_t(n) + 1, 0.0), v(std::size_t(n) + 1, 0.0);
  std::vector<int> p(std::size_t(n) + 1, 0), way(std::size_t(n) + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(std::size_t(n) + 1, inf);
    std::vector<bool> used(std::size_t(n) + 1, false);
    do {
      used[std::size_t(j0)] = true;
      const int i0 = p[std::size_t(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[std::size_t(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[std::size_t(i0)] - v[std::size_t(j)];
        if (cur < minv[std::size_t(j)]) {
          minv[std::size_t(j)] = cur;
          way[std::size_t(j)] = j0;
        }
        if (minv[std::size_t(j)] < delta) {
          delta = minv[std::size_t(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[std::size_t(j)]) {
          u[std::size_t(p[std::size_t(j)])] += delta;
          v[std::size_t(j)] -= delta;
        } else {
          minv[std::size_t(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[std::size_t(j0)] != 0);
    do {
      const int j1 = way[std::size_t(j0)];
      p[std::size_t(j0)] = p[std::size_t(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> assignment(std::size_t(n), -1);
  for (int j = 1; j <= n; ++j) {
    if (p[std::size_t(j)] > 0) assignment[std::size_t(p[std::size_t(j)] - 1)] = j - 1;
  }
  return assignment;
}

namespace detail {

// Ids in order of first appearance, so permuted labelings give identical tables.
inline std::vector<int> first_appearance_ids(const std::vector<int>& labels) {
  std::vector<std::pair<int, int>> seen;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int x : labels) {
    auto it = std::find_if(seen.begin(), seen.end(), [x](const auto& e) { return e.first == x; });
    if (it == seen.end()) {
      seen.emplace_back(x, int(seen.size()));
      out.push_back(int(seen.size()) - 1);
    } else {
      out.push_back(it->second);
    }
  }
  return out;
}

}  // namespace detail

// Contingency table of predictions (rows) against truth (columns), both
// numbered by first appearance.
inline Eigen::MatrixXd contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size()) throw UsageError("label vectors differ in length");
  if (pred.empty()) throw UsageError("label vectors are empty");
  const auto p = detail::first_appearance_ids(pred);
  const auto t = detail::first_appearance_ids(truth);
  const int rows = *std::max_element(p.begin(), p.end()) + 1;
  const int cols = *std::max_element(t.begin(), t.end()) + 1;
  Eigen::MatrixXd table = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t i = 0; i < p.size(); ++i) table(p[i], t[i]) += 1.0;
  return table;
}

// Fraction of instances matched under the best one-to-one cluster-to-class map.
inline double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXd table = contingency(pred, truth);
  const Index size = std::max(table.rows(), table.cols());
  Matrix cost = Matrix::Zero(size, size);
  cost.topLeftCorner(table.rows(), table.cols()) = -table;
  const auto assignment = hungarian(cost);
  double matched = 0.0;
  for (Index r = 0; r < table.rows(); ++r) {
    const int c = assignment[std::size_t(r)];
    if (c < table.cols()) matched += table(r, c);
  }
  return matched / double(pred.size());
}

// I(pred; truth) / sqrt(H(pred) H(truth)) with natural logarithms.
inline double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const Eigen::MatrixXd table = contingency(pred, truth);
  const double n = double(pred.size());
  const Vector rows = table.rowwise().sum();
  const Vector cols = table.colwise().sum().transpose();
  auto entropy = [n](const Vector& counts) {
    double h = 0.0;
    for (Index i = 0; i < counts.size(); ++i) {
      if (counts(i) > 0.0) h -= counts(i) / n * std::log(counts(i) / n);
    }
    return h;
  };
  const double hp = entropy(rows);
  const double ht = entropy(cols);
  if (hp <= 0.0 || ht <= 0.0) {
    // At least one side is a single cluster: identical partitions score 1.
    return (table.rows() == 1 && table.cols() == 1) ? 1.0 : 0.0;
  }
  double mi = 0.0;
  for (Index r = 0; r < table.rows(); ++r) {
    for (Index c = 0; c < table.cols(); ++c) {
      const double nij = table(r, c);
      if (nij > 0.0) mi += nij / n * std::log(nij * n / (rows(r) * cols(c)));
    }
  }
  return std::clamp(mi / std::sqrt(hp * ht), 0.0, 1.0);
}

inline Score score(const std::vector<int>& pred, const std::vector<int>& truth) {
  return {accuracy(pred, truth), nmi(pred, truth)};
}

}  // namespace pic
