#include <gtest/gtest.h>

#include "pic/completion.hpp"
#include "pic/laplacian.hpp"
#include "test_support.hpp"

using namespace pic;

namespace {

MaskedSimilarity masked(const Matrix& values, const BoolMatrix& defined, Index view) {
  return {values, defined, view};
}

}  // namespace

TEST(Completion, MissingEntryTakesCrossViewMean) {
  const Index n = 3;
  BoolMatrix all = BoolMatrix::Constant(n, n, true);
  BoolMatrix hole = all;
  hole(0, 1) = false;
  Matrix a1 = Matrix::Zero(n, n), a2 = Matrix::Zero(n, n), a3 = Matrix::Zero(n, n);
  a1(0, 1) = 0.9;  // ignored, undefined
  a2(0, 1) = 0.4;
  a3(0, 1) = 0.6;
  const auto filled = fill_missing({masked(a1, hole, 0), masked(a2, all, 1), masked(a3, all, 2)});
  EXPECT_DOUBLE_EQ(filled[0].values(0, 1), 0.5);
  EXPECT_EQ(filled[0].provenance(0, 1), Provenance::averaged);
  EXPECT_DOUBLE_EQ(filled[1].values(0, 1), 0.4);
  EXPECT_EQ(filled[1].provenance(0, 1), Provenance::native);
}

TEST(Completion, PairUndefinedEverywhereFallsBackToZero) {
  BoolMatrix hole = BoolMatrix::Constant(2, 2, true);
  hole(0, 1) = false;
  Matrix a = Matrix::Constant(2, 2, 0.7);
  const auto filled = fill_missing({masked(a, hole, 0), masked(a, hole, 1)});
  EXPECT_EQ(filled[0].values(0, 1), 0.0);
  EXPECT_EQ(filled[0].provenance(0, 1), Provenance::zero_fallback);
  EXPECT_EQ(filled[1].provenance(0, 1), Provenance::zero_fallback);
}

TEST(Postprocess, Symmetrizes) {
  Matrix a = Matrix::Zero(2, 2);
  a(0, 1) = 0.2;
  a(1, 0) = 0.4;
  const auto out = postprocess(a);
  EXPECT_DOUBLE_EQ(out.values(0, 1), 0.3);
  EXPECT_DOUBLE_EQ(out.values(1, 0), 0.3);
}

TEST(Postprocess, FixpointOnSymmetricZeroDiagonal) {
  Matrix a(3, 3);
  a << 0, 0.25, 0.5, 0.25, 0, 0.125, 0.5, 0.125, 0;
  EXPECT_EQ(postprocess(a).values, a);
}

TEST(Postprocess, ZeroesDiagonalAndRejectsNonSquare) {
  Matrix a = Matrix::Zero(2, 2);
  a(1, 1) = 0.7;
  EXPECT_EQ(postprocess(a).values(1, 1), 0.0);
  EXPECT_THROW(postprocess(Matrix::Zero(2, 3)), DataError);
}

// Property: defined entries pass through fill_missing bit-for-bit, and the
// completed matrices satisfy the output invariants.
TEST(Completion, PropertyNativeEntriesPreserved) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 4 + Index(rng() % 10);
    const Index m = 2 + Index(rng() % 3);
    std::vector<MaskedSimilarity> sims;
    for (Index v = 0; v < m; ++v) {
      Matrix values(n, n);
      BoolMatrix defined(n, n);
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          values(i, j) = i == j ? 0.0 : u(rng);
          defined(i, j) = u(rng) < 0.6;
        }
      }
      sims.push_back(masked(values, defined, v));
    }
    const auto filled = fill_missing(sims);
    const auto done = complete_all(sims);
    for (Index v = 0; v < m; ++v) {
      for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
          if (sims[v].defined(i, j)) EXPECT_EQ(filled[v].values(i, j), sims[v].values(i, j));
        }
      }
      const Matrix& a = done[v].values;
      EXPECT_LE((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-12);
      EXPECT_EQ(a.diagonal().cwiseAbs().maxCoeff(), 0.0);
      EXPECT_GE(a.minCoeff(), 0.0);
      EXPECT_LE(a.maxCoeff(), 1.0);
    }
  }
}

TEST(Completion, ProvenanceTableCountsEntries) {
  BoolMatrix hole = BoolMatrix::Constant(2, 2, true);
  hole(0, 1) = false;
  const Matrix a = Matrix::Zero(2, 2);
  const auto done = complete_all({masked(a, hole, 0), masked(a, BoolMatrix::Constant(2, 2, true), 1)});
  const auto c = count_provenance(done[0]);
  EXPECT_EQ(c.native, 3);
  EXPECT_EQ(c.averaged, 1);
  EXPECT_EQ(c.zero_fallback, 0);
  EXPECT_NE(provenance_table(done).find("view\tnative"), std::string::npos);
}

TEST(Completion, NoIsolatedVertexMeansPositiveDegrees) {
  Matrix a(3, 3);
  a << 0, 1, 0, 0.5, 0, 0.5, 0, 1, 0;
  const auto done = complete_all({masked(a, BoolMatrix::Constant(3, 3, true), 0)});
  const auto l = normalized_laplacian(done[0]);
  EXPECT_GT(l.degree.minCoeff(), 0.0);
}

// Views share a common similarity structure plus small view-specific noise.
// As more (instance, view) pairs are observed, the completed matrices move
// closer to the per-view truth.
TEST(Completion, ErrorShrinksAsObservationGrows) {
  const Index n = 40, m = 6;
  const std::vector<double> levels = {0.3, 0.6, 0.9};
  std::vector<double> errors(levels.size(), 0.0);
  std::vector<double> zero_fill(levels.size(), 0.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    std::mt19937_64 rng(1000 + rep);
    Matrix base(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) base(i, j) = u(rng);
    }
    base = 0.5 * (base + base.transpose()).eval();
    base.diagonal().setZero();
    std::vector<Matrix> truth;
    for (Index v = 0; v < m; ++v) {
      Matrix noise(n, n);
      for (Index i = 0; i < noise.size(); ++i) noise.data()[i] = 0.1 * (u(rng) - 0.5);
      Matrix t = base + 0.5 * (noise + noise.transpose());
      t = t.cwiseMax(0.0).cwiseMin(1.0);
      t.diagonal().setZero();
      truth.push_back(t);
    }
    for (std::size_t level = 0; level < levels.size(); ++level) {
      BoolMatrix observed(n, m);
      for (Index i = 0; i < n; ++i) {
        for (Index v = 0; v < m; ++v) observed(i, v) = u(rng) < levels[level];
        if (!observed.row(i).any()) observed(i, Index(rng() % m)) = true;
      }
      std::vector<MaskedSimilarity> sims;
      for (Index v = 0; v < m; ++v) {
        BoolMatrix defined(n, n);
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < n; ++j) defined(i, j) = observed(i, v) && observed(j, v);
        }
        sims.push_back(masked(truth[v], defined, v));
      }
      const auto done = complete_all(sims);
      for (Index v = 0; v < m; ++v) {
        errors[level] += (done[v].values - truth[v]).norm();
        const Matrix zeroed = sims[v].defined.select(truth[v], Matrix::Zero(n, n));
        zero_fill[level] += (zeroed - truth[v]).norm();
      }
    }
  }
  EXPECT_GT(errors[0], errors[1]);
  EXPECT_GT(errors[1], errors[2]);
  // Bounded by the error of leaving every undefined entry at zero.
  for (std::size_t level = 0; level < levels.size(); ++level) {
    EXPECT_LT(errors[level], zero_fill[level]);
  }
}
