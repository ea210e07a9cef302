#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pic/common.hpp"
#include "pic/completion.hpp"
#include "pic/consensus.hpp"
#include "pic/dataset.hpp"
#include "pic/laplacian.hpp"
#include "pic/metrics.hpp"
#include "pic/qp.hpp"
#include "pic/similarity.hpp"
#include "pic/spectral.hpp"

namespace pic {

struct PipelineOptions {
  Index clusters = 2;
  Index k_nn = 9;
  double beta_tilde = 0.1;
  std::uint64_t seed = 0;
  Regularizer regularizer = Regularizer::manifold;
  KMeansOptions kmeans;
};

struct StageTimings {
  double similarity_ms = 0.0;
  double completion_ms = 0.0;
  double laplacian_ms = 0.0;
  double eigen_ms = 0.0;
  double consensus_ms = 0.0;
  double clustering_ms = 0.0;

  double total_ms() const {
    return similarity_ms + completion_ms + laplacian_ms + eigen_ms + consensus_ms + clustering_ms;
  }
};

struct ClusteringResult {
  std::vector<int> labels;
  ViewWeights weights;
  double beta = 0.0;
  AngleMatrix angles;
  std::vector<ProvenanceCounts> provenance;
  std::optional<Score> score;
  StageTimings timings;
};

namespace detail {

// Runs one stage, prefixing any library error with the stage name while
// keeping its category.
template <class Fn>
auto run_stage(const char* stage, double& elapsed_ms, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  auto finish = [&] {
    elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                     .count();
  };
  try {
    auto result = fn();
    finish();
    return result;
  } catch (const UsageError& e) {
    throw UsageError(std::string(stage) + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(std::string(stage) + ": " + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(stage) + ": " + e.what());
  }
}

}  // namespace detail

// Similarity per view, cross-view completion, per-view normalized Laplacians
// and top-c subspaces, perturbation-minimizing weights, consensus Laplacian,
// spectral clustering of the consensus.
inline ClusteringResult pic_pipeline(const MultiViewDataset& ds, const PipelineOptions& opt) {
  const Index n = ds.n();
  const Index m = ds.m();
  const Index c = opt.clusters;
  if (c < 1 || c > n) throw UsageError("cluster count must satisfy 1 <= c <= n");
  if (opt.k_nn < 1) throw UsageError("k_nn must be at least 1");
  if (!(opt.beta_tilde >= 0.0)) throw UsageError("beta_tilde must be nonnegative");

  ClusteringResult result;
  auto& t = result.timings;

  const auto masked = detail::run_stage("similarity", t.similarity_ms, [&] {
    std::vector<MaskedSimilarity> sims;
    for (Index v = 0; v < m; ++v) {
      sims.push_back(build_similarity(ds.views[v], ds.mask.col(v), opt.k_nn, v));
    }
    return sims;
  });

  const auto completed = detail::run_stage("completion", t.completion_ms, [&] {
    return complete_all(masked);
  });
  for (const auto& s : completed) result.provenance.push_back(count_provenance(s));

  const auto laplacians = detail::run_stage("laplacian", t.laplacian_ms, [&] {
    std::vector<Matrix> ls;
    bool any_nonzero = false;
    for (const auto& s : completed) {
      ls.push_back(normalized_laplacian(s).L);
      any_nonzero = any_nonzero || ls.back().cwiseAbs().maxCoeff() > 0.0;
    }
    if (!any_nonzero) throw NumericalError("all views collapsed (every Laplacian is zero)");
    return ls;
  });

  const auto subspaces = detail::run_stage("eigen", t.eigen_ms, [&] {
    std::vector<Subspace> subs;
    for (const auto& l : laplacians) subs.push_back(top_k_eigen(l, c));
    return subs;
  });

  const auto l_star = detail::run_stage("consensus", t.consensus_ms, [&] {
    result.angles = build_regularizer(subspaces);
    const Matrix reg = regularizer_matrix(result.angles, opt.regularizer);
    const auto terms = perturbation_terms(laplacians, subspaces);
    result.beta = balance_beta(opt.beta_tilde, terms.Q, reg);
    const QpData qp = build_qp(terms, result.beta, reg);
    result.weights = solve(qp.problem());
    return consensus_laplacian(laplacians, result.weights.omega);
  });

  const auto assignment = detail::run_stage("clustering", t.clustering_ms, [&] {
    return cluster_laplacian(l_star, c, mix64(opt.seed), opt.kmeans);
  });
  result.labels = assignment.labels;
  if (ds.labels) result.score = score(result.labels, *ds.labels);
  return result;
}

// Each view clustered on its own after filling missing instances with the
// view's mean observed feature vector; reports the view with the best ACC.
struct SingleViewBaseline {
  std::vector<Score> per_view;
  Index best_view = 0;
  Score best;
};

inline SingleViewBaseline best_single_view(const MultiViewDataset& ds, Index clusters, Index k_nn,
                                           std::uint64_t seed, const KMeansOptions& kopt = {}) {
  if (!ds.labels) throw DataError("best single view baseline needs ground-truth labels");
  SingleViewBaseline out;
  const BoolVector all = BoolVector::Constant(ds.n(), true);
  for (Index v = 0; v < ds.m(); ++v) {
    Matrix x = ds.views[v];
    Vector mean = Vector::Zero(x.rows());
    const Index observed = ds.observed_count(v);
    for (Index i = 0; i < ds.n(); ++i) {
      if (ds.mask(i, v)) mean += x.col(i);
    }
    if (observed > 0) mean /= double(observed);
    for (Index i = 0; i < ds.n(); ++i) {
      if (!ds.mask(i, v)) x.col(i) = mean;
    }
    const auto sim = build_similarity(x, all, k_nn, v);
    const auto complete = postprocess(sim.values);
    const auto assignment = ng_spectral_cluster(complete, clusters, mix64(seed), kopt);
    out.per_view.push_back(score(assignment.labels, *ds.labels));
    if (v == 0 || out.per_view.back().acc > out.best.acc) {
      out.best = out.per_view.back();
      out.best_view = v;
    }
  }
  return out;
}

}  // namespace pic
