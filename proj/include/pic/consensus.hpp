#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pic/common.hpp"
#include "pic/laplacian.hpp"
#include "pic/qp.hpp"

namespace pic {

// Canonical angles between two k-dimensional subspaces given by orthonormal
// bases: arccos of the singular values of U_a^T U_b, clamped to [0, 1].
// Returned in ascending order.
inline Vector canonical_angles(const Matrix& ua, const Matrix& ub) {
  if (ua.rows() != ub.rows() || ua.cols() != ub.cols()) {
    throw DataError("canonical angles need bases of equal shape");
  }
  const Matrix cross = ua.transpose() * ub;
  Eigen::JacobiSVD<Matrix> svd(cross);
  const Vector gamma = svd.singularValues();  // descending
  Vector theta(gamma.size());
  for (Index h = 0; h < gamma.size(); ++h) theta(h) = std::acos(std::clamp(gamma(h), 0.0, 1.0));
  return theta;
}

inline double largest_canonical_angle(const Matrix& ua, const Matrix& ub) {
  const Vector theta = canonical_angles(ua, ub);
  return theta.size() ? theta.maxCoeff() : 0.0;
}

// View-affinity graph over subspaces: psi = largest canonical angle,
// s_ij = pi - psi_ij off the diagonal, H = diag(S 1) - S.
struct AngleMatrix {
  Matrix psi;
  Matrix S;
  Matrix H;
};

inline AngleMatrix build_regularizer(const std::vector<Subspace>& subspaces) {
  const Index m = Index(subspaces.size());
  if (m < 1) throw DataError("no subspaces");
  AngleMatrix out{Matrix::Zero(m, m), Matrix::Zero(m, m), Matrix::Zero(m, m)};
  for (Index i = 0; i < m; ++i) {
    for (Index j = i + 1; j < m; ++j) {
      const double psi = largest_canonical_angle(subspaces[i].U, subspaces[j].U);
      out.psi(i, j) = out.psi(j, i) = psi;
      out.S(i, j) = out.S(j, i) = std::numbers::pi - psi;
    }
  }
  out.H = -out.S;
  out.H.diagonal() = out.S.rowwise().sum();
  return out;
}

enum class Regularizer { manifold, identity };

inline const char* to_string(Regularizer r) {
  return r == Regularizer::manifold ? "manifold" : "identity";
}

inline Matrix regularizer_matrix(const AngleMatrix& angles, Regularizer kind) {
  if (kind == Regularizer::identity) return Matrix::Identity(angles.H.rows(), angles.H.cols());
  return angles.H;
}

// Per-view quadratic data of the perturbation objective:
//   q_ij^v = Tr(L^i U^v (U^v)^T (L^j)^T) = <L^i U^v, L^j U^v>_F
//   f_i^v  = Tr(L^i U^v Sigma^v (U^v)^T) = <L^i U^v, U^v Sigma^v>_F
struct PerturbationTerms {
  std::vector<Matrix> Q;
  std::vector<Vector> f;
  double constant = 0.0;  // sum_v ||Sigma^v||^2
};

inline PerturbationTerms perturbation_terms(const std::vector<Matrix>& laplacians,
                                            const std::vector<Subspace>& subspaces) {
  const Index m = Index(laplacians.size());
  if (m < 1 || Index(subspaces.size()) != m) throw DataError("need one subspace per Laplacian");
  const Index n = laplacians.front().rows();
  for (const auto& l : laplacians) {
    if (l.rows() != n || l.cols() != n) throw DataError("Laplacians differ in shape");
  }
  PerturbationTerms t;
  for (const auto& sub : subspaces) {
    if (sub.U.rows() != n) throw DataError("subspace dimension does not match Laplacians");
    std::vector<Matrix> projected;
    projected.reserve(std::size_t(m));
    for (const auto& l : laplacians) projected.push_back(l * sub.U);
    const Matrix target = sub.U * sub.sigma.asDiagonal();

    Matrix q(m, m);
    Vector f(m);
    for (Index i = 0; i < m; ++i) {
      for (Index j = i; j < m; ++j) {
        q(i, j) = q(j, i) = projected[i].cwiseProduct(projected[j]).sum();
      }
      f(i) = projected[i].cwiseProduct(target).sum();
    }
    t.Q.push_back(std::move(q));
    t.f.push_back(std::move(f));
    t.constant += sub.sigma.squaredNorm();
  }
  return t;
}

// Direct evaluation of sum_v ||(sum_u w_u L^u) U^v - U^v Sigma^v||_F^2.
inline double perturbation_objective(const std::vector<Matrix>& laplacians,
                                     const std::vector<Subspace>& subspaces, const Vector& w) {
  Matrix l_star = Matrix::Zero(laplacians.front().rows(), laplacians.front().cols());
  for (std::size_t u = 0; u < laplacians.size(); ++u) l_star += w(Index(u)) * laplacians[u];
  double total = 0.0;
  for (const auto& sub : subspaces) {
    total += (l_star * sub.U - sub.U * sub.sigma.asDiagonal()).squaredNorm();
  }
  return total;
}

// beta = beta_tilde * ||sum_v Q^v||_F / ||R||_F, with R the regularizer matrix;
// when ||R||_F vanishes the identity norm sqrt(m) is used instead.
inline double balance_beta(double beta_tilde, const std::vector<Matrix>& per_view_q,
                           const Matrix& regularizer) {
  if (!(beta_tilde >= 0.0)) throw UsageError("beta_tilde must be nonnegative");
  if (beta_tilde == 0.0 || per_view_q.empty()) return 0.0;
  Matrix total = Matrix::Zero(per_view_q.front().rows(), per_view_q.front().cols());
  for (const auto& q : per_view_q) total += q;
  const double reg_norm = regularizer.norm();
  const double denom = reg_norm > 1e-12 ? reg_norm : std::sqrt(double(regularizer.rows()));
  return beta_tilde * total.norm() / denom;
}

struct QpData {
  Matrix Q_total;
  Vector f_total;
  double beta = 0.0;
  std::vector<Matrix> per_view_Q;
  std::vector<Vector> per_view_f;
  double constant = 0.0;

  SimplexQp problem() const { return {Q_total, f_total}; }
};

inline QpData build_qp(const PerturbationTerms& terms, double beta, const Matrix& regularizer) {
  const Index m = terms.Q.front().rows();
  if (regularizer.rows() != m || regularizer.cols() != m) {
    throw DataError("regularizer must be m x m");
  }
  QpData out;
  out.Q_total = Matrix::Zero(m, m);
  out.f_total = Vector::Zero(m);
  for (std::size_t v = 0; v < terms.Q.size(); ++v) {
    out.Q_total += terms.Q[v];
    out.f_total += terms.f[v];
  }
  if (beta != 0.0) out.Q_total += beta * regularizer;
  out.beta = beta;
  out.per_view_Q = terms.Q;
  out.per_view_f = terms.f;
  out.constant = terms.constant;
  return out;
}

inline QpData build_qp(const std::vector<Matrix>& laplacians, const std::vector<Subspace>& subspaces,
                       double beta, const Matrix& regularizer) {
  return build_qp(perturbation_terms(laplacians, subspaces), beta, regularizer);
}

inline Matrix consensus_laplacian(const std::vector<Matrix>& laplacians, const Vector& omega) {
  if (laplacians.empty() || Index(laplacians.size()) != omega.size()) {
    throw DataError("need one weight per Laplacian");
  }
  Matrix out = Matrix::Zero(laplacians.front().rows(), laplacians.front().cols());
  for (std::size_t v = 0; v < laplacians.size(); ++v) {
    if (omega(Index(v)) != 0.0) out += omega(Index(v)) * laplacians[v];
  }
  return out;
}

// Both sides of the sin-theta perturbation bound:
//   lhs = ||sin Theta(U^v, U^*)||_F,  rhs = ||L* U^v - U^v Sigma^v||_F / xi,
// where U^* spans the top-k eigenvectors of L*.
struct BoundCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline BoundCheck sin_theta_bound_check(const Matrix& l_star, const Subspace& view, double xi) {
  if (!(xi > 0.0)) throw UsageError("spectral gap xi must be positive");
  const Subspace star = top_k_eigen(l_star, view.k());
  const Vector theta = canonical_angles(view.U, star.U);
  BoundCheck out;
  out.lhs = theta.array().sin().matrix().norm();
  out.rhs = (l_star * view.U - view.U * view.sigma.asDiagonal()).norm() / xi;
  return out;
}

// Entry-wise form of the bound: sqrt(k) * n * eps / xi with eps = max |l*_ij - l^v_ij|.
inline double entrywise_sin_theta_bound(const Matrix& l_star, const Matrix& l_view, Index k,
                                        double xi) {
  if (!(xi > 0.0)) throw UsageError("spectral gap xi must be positive");
  const double eps = (l_star - l_view).cwiseAbs().maxCoeff();
  return std::sqrt(double(k)) * double(l_star.rows()) * eps / xi;
}

// Structured-text dump of the angle matrix, weights, beta and objective.
inline std::string consensus_diagnostics(const AngleMatrix& angles, const ViewWeights& w,
                                         double beta, Regularizer kind) {
  std::ostringstream os;
  os.precision(17);
  os << "regularizer " << to_string(kind) << "\n";
  os << "beta " << beta << "\n";
  os << "objective " << w.objective << "\n";
  os << "omega";
  for (Index v = 0; v < w.omega.size(); ++v) os << ' ' << w.omega(v);
  os << "\npsi\n";
  for (Index i = 0; i < angles.psi.rows(); ++i) {
    for (Index j = 0; j < angles.psi.cols(); ++j) os << (j ? " " : "") << angles.psi(i, j);
    os << "\n";
  }
  return os.str();
}

}  // namespace pic
