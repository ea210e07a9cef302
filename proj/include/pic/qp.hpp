#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "pic/common.hpp"

namespace pic {

// minimize w^T Q w - 2 f^T w  subject to  sum(w) = 1, w >= 0.
struct SimplexQp {
  Matrix Q;
  Vector f;
};

struct ViewWeights {
  Vector omega;
  double objective = 0.0;
  std::vector<Index> active_support;  // views with omega_v > 0
};

inline constexpr Index kMaxEnumerationViews = 16;

inline double qp_objective(const SimplexQp& p, const Vector& w) {
  return w.dot(p.Q * w) - 2.0 * w.dot(p.f);
}

// Euclidean projection onto the probability simplex (sorted-threshold rule).
inline Vector project_simplex(const Vector& v) {
  const Index m = v.size();
  if (m == 0) return v;
  std::vector<double> u(v.data(), v.data() + m);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < m; ++j) {
    cumsum += u[std::size_t(j)];
    const double t = (cumsum - 1.0) / double(j + 1);
    if (u[std::size_t(j)] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0).matrix();
}

namespace detail {

inline std::vector<Index> support_of(const Vector& w) {
  std::vector<Index> s;
  for (Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) s.push_back(i);
  }
  return s;
}

inline ViewWeights make_weights(const SimplexQp& p, Vector w) {
  ViewWeights out;
  out.objective = qp_objective(p, w);
  out.active_support = support_of(w);
  out.omega = std::move(w);
  return out;
}

// Validates shapes and symmetry, then clips eigenvalues in [-tol, 0) to zero.
inline SimplexQp checked_problem(const SimplexQp& p) {
  const Index m = p.Q.rows();
  if (m < 1 || p.Q.cols() != m || p.f.size() != m) throw UsageError("QP dimensions are inconsistent");
  const double scale = std::max(1.0, p.Q.cwiseAbs().maxCoeff());
  if ((p.Q - p.Q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw UsageError("QP matrix is not symmetric");
  }
  SimplexQp out{0.5 * (p.Q + p.Q.transpose()), p.f};
  Eigen::SelfAdjointEigenSolver<Matrix> eig(out.Q);
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -1e-8 * scale) {
    throw NumericalError("QP matrix is not positive semidefinite (min eigenvalue " +
                         std::to_string(min_eig) + ")");
  }
  if (min_eig < 0.0) {
    const Vector clipped = eig.eigenvalues().cwiseMax(0.0);
    out.Q = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
    out.Q = 0.5 * (out.Q + out.Q.transpose()).eval();
  }
  return out;
}

inline bool lexicographically_less(const std::vector<Index>& a, const std::vector<Index>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

// KKT certificate for a candidate simplex point: multipliers mu (equality, free
// sign) and nu >= 0 (bounds) with 2Qw - 2f + mu 1 - nu = 0 and nu .* w = 0.
struct KktReport {
  double mu = 0.0;
  Vector nu;
  double stationarity = 0.0;    // max |g_j + mu| over the support
  double dual_violation = 0.0;  // max(0, -nu_j) over all j
  double complementarity = 0.0; // max |nu_j w_j|
  double primal_violation = 0.0;

  bool holds(double tol) const {
    return stationarity <= tol && dual_violation <= tol && complementarity <= tol &&
           primal_violation <= tol;
  }
};

inline KktReport kkt_report(const SimplexQp& p, const Vector& w, double support_tol = 1e-12) {
  KktReport r;
  const Vector g = 2.0 * (p.Q * w) - 2.0 * p.f;
  Index active = 0;
  double sum = 0.0;
  for (Index j = 0; j < w.size(); ++j) {
    if (w(j) > support_tol) {
      sum += -g(j);
      ++active;
    }
  }
  r.mu = active ? sum / double(active) : 0.0;
  r.nu = g.array() + r.mu;
  for (Index j = 0; j < w.size(); ++j) {
    if (w(j) > support_tol) r.stationarity = std::max(r.stationarity, std::abs(r.nu(j)));
    r.dual_violation = std::max(r.dual_violation, -r.nu(j));
    r.complementarity = std::max(r.complementarity, std::abs(r.nu(j) * w(j)));
    r.primal_violation = std::max(r.primal_violation, -w(j));
  }
  r.primal_violation = std::max(r.primal_violation, std::abs(w.sum() - 1.0));
  return r;
}

// Accelerated projected gradient with adaptive restart, started at the
// barycenter. Stops when successive objectives differ by less than tol.
inline ViewWeights solve_projected_gradient(const SimplexQp& problem, double tol = 1e-12,
                                            int max_iter = 100000) {
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
  const SimplexQp p = detail::checked_problem(problem);
  const Index m = p.Q.rows();
  const double lipschitz = 2.0 * Eigen::SelfAdjointEigenSolver<Matrix>(p.Q, Eigen::EigenvaluesOnly)
                                     .eigenvalues()
                                     .maxCoeff();
  const double step = lipschitz > 1e-15 ? 1.0 / lipschitz : 1.0;

  auto grad = [&](const Vector& x) -> Vector { return 2.0 * (p.Q * x) - 2.0 * p.f; };
  // Stops on the gradient-mapping residual |w - P(w - step grad(w))|_inf.
  auto residual = [&](const Vector& x) {
    return (x - project_simplex(x - step * grad(x))).cwiseAbs().maxCoeff();
  };

  Vector w = Vector::Constant(m, 1.0 / double(m));
  if (residual(w) <= tol) return detail::make_weights(p, w);
  Vector y = w;
  double t = 1.0;
  double obj = qp_objective(p, w);
  for (int it = 0; it < max_iter; ++it) {
    Vector next = project_simplex(y - step * grad(y));
    const double next_obj = qp_objective(p, next);
    if (next_obj > obj && t > 1.0) {
      // Momentum overshoot: restart from the current iterate.
      t = 1.0;
      y = w;
      continue;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - w);
    t = t_next;
    w = std::move(next);
    obj = next_obj;
    if (residual(w) <= tol) return detail::make_weights(p, w);
  }
  throw NumericalError("projected gradient did not reach tolerance within max_iter");
}

// Exact global minimizer by support enumeration. For each nonempty support T
// the equality-constrained KKT system
//   [2 Q_TT  1] [w_T]   [2 f_T]
//   [1^T     0] [mu ] = [  1  ]
// is solved (minimum-norm solution when singular); the candidate is accepted
// when w_T is nonnegative and every excluded view has a nonnegative bound
// multiplier. Ties go to the lexicographically smallest support.
inline ViewWeights solve(const SimplexQp& problem) {
  const SimplexQp p = detail::checked_problem(problem);
  const Index m = p.Q.rows();
  if (m > kMaxEnumerationViews) {
    throw UsageError("support enumeration supports at most " +
                     std::to_string(kMaxEnumerationViews) + " views; use solve_projected_gradient");
  }
  const double scale = std::max({1.0, p.Q.cwiseAbs().maxCoeff(), p.f.cwiseAbs().maxCoeff()});
  const double dual_tol = 1e-9 * scale;

  bool found = false;
  Vector best;
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<Index> best_support;

  const std::uint32_t count = (std::uint32_t(1) << m) - 1;
  for (std::uint32_t bits = 1; bits <= count; ++bits) {
    std::vector<Index> support;
    for (Index i = 0; i < m; ++i) {
      if (bits & (std::uint32_t(1) << i)) support.push_back(i);
    }
    const Index s = Index(support.size());
    Matrix kkt = Matrix::Zero(s + 1, s + 1);
    Vector rhs(s + 1);
    for (Index a = 0; a < s; ++a) {
      for (Index b = 0; b < s; ++b) kkt(a, b) = 2.0 * p.Q(support[a], support[b]);
      kkt(a, s) = 1.0;
      kkt(s, a) = 1.0;
      rhs(a) = 2.0 * p.f(support[a]);
    }
    rhs(s) = 1.0;
    const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
    if ((kkt * sol - rhs).norm() > 1e-9 * std::max(1.0, rhs.norm()) * double(s + 1) * scale) {
      continue;  // inconsistent singular system
    }
    if (sol.head(s).minCoeff() < -1e-12) continue;

    Vector w = Vector::Zero(m);
    for (Index a = 0; a < s; ++a) w(support[a]) = std::max(0.0, sol(a));
    const double total = w.sum();
    if (!(total > 0.0)) continue;
    w /= total;

    const double mu = sol(s);
    const Vector g = 2.0 * (p.Q * w) - 2.0 * p.f;
    bool dual_ok = true;
    for (Index j = 0; j < m && dual_ok; ++j) {
      if (!(bits & (std::uint32_t(1) << j))) dual_ok = g(j) + mu >= -dual_tol;
    }
    if (!dual_ok) continue;

    const double obj = qp_objective(p, w);
    const double tie = 1e-12 * std::max(1.0, std::abs(obj));
    const bool better = !found || obj < best_obj - tie ||
                        (std::abs(obj - best_obj) <= tie &&
                         detail::lexicographically_less(support, best_support));
    if (better) {
      found = true;
      best = w;
      best_obj = obj;
      best_support = support;
    }
  }
  if (!found) throw NumericalError("no support set satisfied the KKT conditions");
  return detail::make_weights(p, best);
}

}  // namespace pic
