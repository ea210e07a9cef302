#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "pic/common.hpp"
#include "pic/completion.hpp"
#include "pic/laplacian.hpp"

namespace pic {

struct Embedding {
  Matrix Y;                     // n x k, unit-norm rows
  std::vector<bool> zero_rows;  // rows left at the origin (isolated vertices)
};

struct ClusterAssignment {
  std::vector<int> labels;
  Matrix centers;  // c x k
  double inertia = 0.0;
};

struct KMeansOptions {
  int restarts = 20;
  int max_iter = 300;
  double tolerance = 1e-9;  // max center movement
};

inline Embedding embed(const Subspace& sub) {
  Embedding out{sub.U, std::vector<bool>(std::size_t(sub.U.rows()), false)};
  for (Index i = 0; i < out.Y.rows(); ++i) {
    const double norm = out.Y.row(i).norm();
    if (norm < 1e-12) {
      out.Y.row(i).setZero();
      out.zero_rows[std::size_t(i)] = true;
    } else {
      out.Y.row(i) /= norm;
    }
  }
  return out;
}

namespace detail {

// k-means++ seeding. Falls back to a uniform pick among unused points when all
// remaining squared distances are zero.
template <class Engine>
Matrix seed_plus_plus(const Matrix& y, Index c, Engine& rng) {
  const Index n = y.rows();
  Matrix centers(c, y.cols());
  std::vector<bool> used(std::size_t(n), false);
  Index first = Index(uniform_below(rng, std::uint64_t(n)));
  centers.row(0) = y.row(first);
  used[std::size_t(first)] = true;
  Vector d2 = (y.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (Index h = 1; h < c; ++h) {
    const double total = d2.sum();
    Index pick = -1;
    if (total > 0.0) {
      const double target = uniform_unit(rng) * total;
      double acc = 0.0;
      for (Index i = 0; i < n; ++i) {
        acc += d2(i);
        if (d2(i) > 0.0 && acc > target) {
          pick = i;
          break;
        }
      }
      if (pick < 0) {
        for (Index i = n - 1; i >= 0; --i) {
          if (d2(i) > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      std::vector<Index> unused;
      for (Index i = 0; i < n; ++i) {
        if (!used[std::size_t(i)]) unused.push_back(i);
      }
      pick = unused[std::size_t(uniform_below(rng, unused.size()))];
    }
    used[std::size_t(pick)] = true;
    centers.row(h) = y.row(pick);
    d2 = d2.cwiseMin((y.rowwise() - centers.row(h)).rowwise().squaredNorm());
  }
  return centers;
}

inline ClusterAssignment lloyd(const Matrix& y, Matrix centers, const KMeansOptions& opt) {
  const Index n = y.rows();
  const Index c = centers.rows();
  std::vector<int> labels(std::size_t(n), 0);
  Vector dist(n);

  auto assign = [&] {
    for (Index i = 0; i < n; ++i) {
      double best = std::numeric_limits<double>::infinity();
      int arg = 0;
      for (Index h = 0; h < c; ++h) {
        const double d = (y.row(i) - centers.row(h)).squaredNorm();
        if (d < best) {
          best = d;
          arg = int(h);
        }
      }
      labels[std::size_t(i)] = arg;
      dist(i) = best;
    }
  };

  assign();
  for (int it = 0; it < opt.max_iter; ++it) {
    Matrix next = Matrix::Zero(c, y.cols());
    std::vector<Index> sizes(std::size_t(c), 0);
    for (Index i = 0; i < n; ++i) {
      next.row(labels[std::size_t(i)]) += y.row(i);
      ++sizes[std::size_t(labels[std::size_t(i)])];
    }
    for (Index h = 0; h < c; ++h) {
      if (sizes[std::size_t(h)] > 0) {
        next.row(h) /= double(sizes[std::size_t(h)]);
        continue;
      }
      // Empty cluster: take over the point farthest from its center.
      Index far = 0;
      for (Index i = 1; i < n; ++i) {
        if (dist(i) > dist(far)) far = i;
      }
      next.row(h) = y.row(far);
      --sizes[std::size_t(labels[std::size_t(far)])];
      labels[std::size_t(far)] = int(h);
      sizes[std::size_t(h)] = 1;
      dist(far) = 0.0;
    }
    const double moved = (next - centers).rowwise().norm().maxCoeff();
    centers = std::move(next);
    assign();
    if (moved < opt.tolerance) break;
  }

  ClusterAssignment out{std::move(labels), std::move(centers), 0.0};
  out.inertia = dist.sum();
  return out;
}

}  // namespace detail

// k-means++ seeding plus Lloyd iterations, best inertia over restarts (earliest
// restart wins ties). Deterministic given the seed.
inline ClusterAssignment kmeans(const Matrix& y, Index c, std::uint64_t seed,
                                const KMeansOptions& opt = {}) {
  if (c < 1) throw UsageError("cluster count must be at least 1");
  if (c > y.rows()) throw UsageError("cluster count exceeds number of points");
  if (opt.restarts < 1) throw UsageError("restarts must be at least 1");
  std::mt19937_64 rng(seed);
  ClusterAssignment best;
  bool have = false;
  for (int r = 0; r < opt.restarts; ++r) {
    auto result = detail::lloyd(y, detail::seed_plus_plus(y, c, rng), opt);
    if (!have || result.inertia < best.inertia) {
      best = std::move(result);
      have = true;
    }
  }
  return best;
}

inline ClusterAssignment kmeans(const Embedding& e, Index c, std::uint64_t seed,
                                const KMeansOptions& opt = {}) {
  return kmeans(e.Y, c, seed, opt);
}

// Spectral finisher on an already formed (normalized or consensus) Laplacian:
// top-c eigenvectors, row normalization, k-means.
inline ClusterAssignment cluster_laplacian(const Matrix& l, Index c, std::uint64_t seed,
                                           const KMeansOptions& opt = {}) {
  if (c < 1 || c > l.rows()) throw UsageError("cluster count must satisfy 1 <= c <= n");
  return kmeans(embed(top_k_eigen(l, c)), c, seed, opt);
}

inline ClusterAssignment ng_spectral_cluster(const Matrix& a, Index c, std::uint64_t seed,
                                             const KMeansOptions& opt = {}) {
  return cluster_laplacian(normalized_laplacian(a).L, c, seed, opt);
}

inline ClusterAssignment ng_spectral_cluster(const CompleteSimilarity& a, Index c,
                                             std::uint64_t seed, const KMeansOptions& opt = {}) {
  return ng_spectral_cluster(a.values, c, seed, opt);
}

}  // namespace pic
