#include <gtest/gtest.h>

#include "pic/similarity.hpp"
#include "test_support.hpp"

using namespace pic;

namespace {

DistanceRow make_row(std::vector<double> d, std::vector<bool> defined) {
  DistanceRow row{Vector::Map(d.data(), Index(d.size())), BoolVector(Index(d.size()))};
  for (std::size_t i = 0; i < defined.size(); ++i) row.defined(Index(i)) = defined[i];
  return row;
}

Vector dense(const std::vector<NeighborWeight>& weights, Index n) {
  Vector a = Vector::Zero(n);
  for (const auto& [j, w] : weights) a(j) = w;
  return a;
}

// Solves min ||a + d / (2 alpha)||^2 over the simplex on defined non-self
// entries by bisection projection.
Vector oracle_row(const DistanceRow& row, Index self, double alpha) {
  std::vector<Index> idx;
  for (Index j = 0; j < row.d.size(); ++j) {
    if (j != self && row.defined(j)) idx.push_back(j);
  }
  Vector v(Index(idx.size()));
  for (std::size_t h = 0; h < idx.size(); ++h) v(Index(h)) = -row.d(idx[h]) / (2.0 * alpha);
  const Vector p = pic_test::simplex_projection_bisection(v);
  Vector a = Vector::Zero(row.d.size());
  for (std::size_t h = 0; h < idx.size(); ++h) a(idx[h]) = p(Index(h));
  return a;
}

}  // namespace

TEST(DistanceRow, IdenticalColumnsHaveZeroDistance) {
  Matrix x(2, 3);
  x << 1, 1, 0, 2, 2, 0;
  const auto row = distance_row(x, BoolVector::Constant(3, true), 0);
  EXPECT_EQ(row.d(1), 0.0);
}

TEST(DistanceRow, PythagoreanDistance) {
  Matrix x(2, 2);
  x << 0, 3, 0, 4;
  const auto row = distance_row(x, BoolVector::Constant(2, true), 0);
  EXPECT_DOUBLE_EQ(row.d(1), 25.0);
  EXPECT_EQ(row.d(0), 0.0);
}

TEST(DistanceRow, UnobservedInstanceIsUndefined) {
  Matrix x(1, 3);
  x << 0, 1e300, 2;
  BoolVector observed(3);
  observed << true, false, true;
  const auto row = distance_row(x, observed, 0);
  EXPECT_FALSE(row.defined(1));
  EXPECT_TRUE(row.defined(2));
  EXPECT_THROW(distance_row(x, observed, 1), DataError);
}

TEST(AdaptiveRow, ClosedFormMatchesSimplexProjection) {
  // Self at index 0, distances {1, 2, 4}; alpha = (2*4 - 3) / 2.
  const auto row = make_row({0, 1, 2, 4}, {true, true, true, true});
  const Vector a = dense(adaptive_row(row, 0, 2), 4);
  EXPECT_NEAR(a(1), 3.0 / 5.0, 1e-15);
  EXPECT_NEAR(a(2), 2.0 / 5.0, 1e-15);
  EXPECT_EQ(a(3), 0.0);
  EXPECT_DOUBLE_EQ(adaptive_alpha(row, 0, 2), 2.5);
  const Vector oracle = oracle_row(row, 0, 2.5);
  EXPECT_LT((a - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(AdaptiveRow, SingleCandidateTakesAllWeight) {
  const auto row = make_row({0, 7, 3}, {true, true, false});
  const auto w = adaptive_row(row, 0, 1);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_EQ(w[0].index, 1);
  EXPECT_EQ(w[0].weight, 1.0);
}

TEST(AdaptiveRow, TiesThroughNextNeighborGiveUniformWeights) {
  const auto row = make_row({0, 2, 2, 2, 2}, {true, true, true, true, true});
  const Vector a = dense(adaptive_row(row, 0, 3), 5);
  EXPECT_DOUBLE_EQ(a(1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(a(2), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(a(3), 1.0 / 3.0);
  EXPECT_EQ(a(4), 0.0);
}

TEST(AdaptiveRow, IsolatedInstanceIsAnError) {
  const auto row = make_row({0, 1}, {true, false});
  EXPECT_THROW(adaptive_row(row, 0, 3), DataError);
}

TEST(AdaptiveRow, NeighborCountClampedToAvailableMinusOne) {
  const auto row = make_row({0, 1, 3, 6}, {true, true, true, true});
  const auto w = adaptive_row(row, 0, 9);
  ASSERT_EQ(w.size(), 2u);  // 3 candidates -> k = 2
  EXPECT_NEAR(w[0].weight + w[1].weight, 1.0, 1e-15);
}

// Property: random rows with random undefined entries agree with the
// projection oracle and have exactly k strictly positive entries.
TEST(AdaptiveRow, PropertyAgreesWithOracle) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 3 + Index(rng() % 30);
    const Index self = Index(rng() % std::uint64_t(n));
    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<bool> defined(static_cast<std::size_t>(n));
    Index available = 0;
    for (Index j = 0; j < n; ++j) {
      d[std::size_t(j)] = j == self ? 0.0 : u(rng);
      defined[std::size_t(j)] = j == self || rng() % 4 != 0;
      if (j != self && defined[std::size_t(j)]) ++available;
    }
    if (available < 2) continue;
    const auto row = make_row(d, defined);
    const Index k_nn = 1 + Index(rng() % 8);
    const Vector a = dense(adaptive_row(row, self, k_nn), n);
    const Vector oracle = oracle_row(row, self, adaptive_alpha(row, self, k_nn));
    EXPECT_LT((a - oracle).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ((a.array() > 0.0).count(), std::min(k_nn, available - 1));
    EXPECT_NEAR(a.sum(), 1.0, 1e-12);
  }
}

TEST(BuildSimilarity, TwoInstancesAreMutualNeighbors) {
  Matrix x(1, 2);
  x << 0, 5;
  const auto s = build_similarity(x, BoolVector::Constant(2, true), 9);
  EXPECT_EQ(s.values(0, 1), 1.0);
  EXPECT_EQ(s.values(1, 0), 1.0);
  EXPECT_EQ(s.values(0, 0), 0.0);
  EXPECT_EQ(s.values(1, 1), 0.0);
}

TEST(BuildSimilarity, UnobservedInstanceRowAndColumnUndefined) {
  std::mt19937_64 rng(1);
  const Matrix x = pic_test::random_matrix(rng, 3, 6);
  BoolVector observed = BoolVector::Constant(6, true);
  observed(2) = false;
  const auto s = build_similarity(x, observed, 2);
  EXPECT_FALSE(s.defined.row(2).any());
  EXPECT_FALSE(s.defined.col(2).any());
  EXPECT_TRUE(s.defined(0, 1));
}

TEST(BuildSimilarity, RowsSumToOneOnRandomView) {
  std::mt19937_64 rng(3);
  const Matrix x = pic_test::random_matrix(rng, 10, 3);  // 10 features, 3 instances
  const Matrix y = pic_test::random_matrix(rng, 3, 10);  // 3 features, 10 instances
  for (const Matrix* view : {&x, &y}) {
    const auto s = build_similarity(*view, BoolVector::Constant(view->cols(), true), 9);
    for (Index i = 0; i < s.values.rows(); ++i) {
      EXPECT_NEAR(s.values.row(i).sum(), 1.0, 1e-12);
      EXPECT_EQ(s.values(i, i), 0.0);
    }
    EXPECT_GE(s.values.minCoeff(), 0.0);
    EXPECT_LE(s.values.maxCoeff(), 1.0);
  }
}

TEST(BuildSimilarity, TooFewObservedInstances) {
  Matrix x(1, 3);
  x << 1, 2, 3;
  BoolVector observed(3);
  observed << true, false, false;
  EXPECT_THROW(build_similarity(x, observed, 2), DataError);
}
