#include <gtest/gtest.h>

#include "pic/laplacian.hpp"
#include "test_support.hpp"

using namespace pic;
using pic_test::block_similarity;

namespace {

int count_near_one(const Vector& values, double tol) {
  return int(((values.array() - 1.0).abs() < tol).count());
}

}  // namespace

TEST(NormalizedLaplacian, CompleteBlocksGiveScaledAllOnes) {
  const int b = 4;
  const auto l = normalized_laplacian(block_similarity({b, b}));
  for (Index i = 0; i < 2 * b; ++i) {
    for (Index j = 0; j < 2 * b; ++j) {
      const bool same_block = (i / b) == (j / b);
      const double expected = (same_block && i != j) ? 1.0 / (b - 1) : 0.0;
      EXPECT_NEAR(l.L(i, j), expected, 1e-15);
    }
  }
}

TEST(NormalizedLaplacian, ZeroMatrixUsesZeroDegreeGuard) {
  const auto l = normalized_laplacian(Matrix::Zero(4, 4));
  EXPECT_EQ(l.L, Matrix::Zero(4, 4));
  EXPECT_EQ(l.degree, Vector::Zero(4));
}

TEST(NormalizedLaplacian, UniformDegreeDividesBySum) {
  Matrix a(3, 3);
  a << 0, 1, 1, 1, 0, 1, 1, 1, 0;
  a *= 0.75;  // every row sums to 1.5
  const auto l = normalized_laplacian(a);
  EXPECT_LT((l.L - a / 1.5).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(NormalizedLaplacian, IsolatedVertexGetsZeroRow) {
  Matrix a = block_similarity({3, 1});
  const auto l = normalized_laplacian(a);
  EXPECT_EQ(l.L.row(3).cwiseAbs().sum(), 0.0);
  EXPECT_EQ(l.L.col(3).cwiseAbs().sum(), 0.0);
}

TEST(TopKEigen, IdentitySpectrum) {
  const auto s = top_k_eigen(Matrix::Identity(5, 5), 3);
  EXPECT_LT((s.sigma - Vector::Ones(3)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((s.U.transpose() * s.U - Matrix::Identity(3, 3)).norm(), 1e-10);
}

TEST(TopKEigen, TwoBlockIdealHasDoubleUnitEigenvalue) {
  const auto l = normalized_laplacian(block_similarity({3, 4}));
  const auto s = top_k_eigen(l, 2);
  EXPECT_NEAR(s.sigma(0), 1.0, 1e-12);
  EXPECT_NEAR(s.sigma(1), 1.0, 1e-12);
  // Independent route: multiplicity of the root 1 of det(xI - L).
  EXPECT_EQ(pic_test::root_multiplicity(pic_test::characteristic_polynomial(l.L), 1.0, 1e-9), 2);
}

TEST(TopKEigen, CharacteristicPolynomialAgreesOnSmallBlocks) {
  for (const auto& sizes : std::vector<std::vector<int>>{{3, 3}, {2, 4}, {2, 2, 2}, {6}}) {
    const auto l = normalized_laplacian(block_similarity(sizes));
    const auto s = top_k_eigen(l, l.L.rows());
    const int by_eigensolver = count_near_one(s.sigma, 1e-8);
    const int by_polynomial =
        pic_test::root_multiplicity(pic_test::characteristic_polynomial(l.L), 1.0, 1e-9);
    EXPECT_EQ(by_eigensolver, int(sizes.size()));
    EXPECT_EQ(by_polynomial, int(sizes.size()));
  }
}

TEST(TopKEigen, FullBasisTraceIdentity) {
  std::mt19937_64 rng(17);
  const Matrix a = pic_test::random_symmetric(rng, 9);
  const auto s = top_k_eigen(a, 9);
  EXPECT_NEAR(s.sigma.sum(), a.trace(), 1e-8);
  EXPECT_LT((s.U.transpose() * s.U - Matrix::Identity(9, 9)).norm(), 1e-10);
  for (Index i = 1; i < 9; ++i) EXPECT_GE(s.sigma(i - 1), s.sigma(i));
}

TEST(TopKEigen, RejectsBadK) {
  EXPECT_THROW(top_k_eigen(Matrix::Identity(3, 3), 0), UsageError);
  EXPECT_THROW(top_k_eigen(Matrix::Identity(3, 3), 4), UsageError);
}

// Property: residual and orthonormality bounds on random symmetric inputs;
// sign convention holds and repeated calls are bit-identical.
TEST(TopKEigen, PropertyResidualAndSigns) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const Index n = 2 + Index(rng() % 40);
    const Index k = 1 + Index(rng() % std::uint64_t(n));
    const Matrix l = pic_test::random_symmetric(rng, n) / std::sqrt(double(n));
    const auto s = top_k_eigen(l, k);
    EXPECT_LE((l * s.U - s.U * s.sigma.asDiagonal()).norm(), 1e-8 * double(n));
    EXPECT_LT((s.U.transpose() * s.U - Matrix::Identity(k, k)).cwiseAbs().maxCoeff(), 1e-10);
    for (Index c = 0; c < k; ++c) {
      Index arg;
      s.U.col(c).cwiseAbs().maxCoeff(&arg);
      EXPECT_GT(s.U(arg, c), 0.0);
    }
    const auto again = top_k_eigen(l, k);
    EXPECT_EQ(again.U, s.U);
    EXPECT_EQ(again.sigma, s.sigma);
  }
}

// Property: c connected blocks with random positive weights give eigenvalue 1
// with multiplicity exactly c.
TEST(TopKEigen, PropertyIdealMultiplicityEqualsComponents) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int c = 1 + int(rng() % 5);
    std::vector<int> sizes;
    for (int h = 0; h < c; ++h) sizes.push_back(2 + int(rng() % 8));
    Matrix a = block_similarity(sizes);
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = i + 1; j < a.cols(); ++j) {
        if (a(i, j) > 0.0) a(i, j) = a(j, i) = u(rng);
      }
    }
    const auto l = normalized_laplacian(a);
    const auto s = top_k_eigen(l, l.L.rows());
    EXPECT_EQ(count_near_one(s.sigma, 1e-8), c);
    EXPECT_LE(s.sigma.maxCoeff(), 1.0 + 1e-12);
    EXPECT_GE(s.sigma.minCoeff(), -1.0 - 1e-12);
  }
}
