#include "eeht/linalg.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace eeht;

TEST(L1Norm, Examples) {
  EXPECT_EQ(linalg::l1_norm(DenseMatrix::Zero(3, 3)), 0.0);
  EXPECT_EQ(linalg::l1_norm(DenseMatrix::Identity(2, 2)), 1.0);
  DenseMatrix a(2, 2);
  a << 1, -2, 3, 4;
  EXPECT_EQ(linalg::l1_norm(a), oracle::column_sum_norm(a));
  EXPECT_EQ(linalg::l1_norm(a), 6.0);
}

TEST(L1Norm, SignAndScale) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    const DenseMatrix a = oracle::random_matrix(1 + t % 7, 1 + t % 5, 100 + t, -1.0, 1.0);
    const double k = c(rng);
    EXPECT_EQ(linalg::l1_norm(a), linalg::l1_norm(-a));
    EXPECT_NEAR(linalg::l1_norm(k * a), std::abs(k) * linalg::l1_norm(a), 1e-12 * (1 + std::abs(k)));
  }
}

TEST(L1Norm, RejectsInvalid) {
  EXPECT_THROW(linalg::l1_norm(DenseMatrix(0, 3)), DomainError);
  DenseMatrix a = DenseMatrix::Zero(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(linalg::l1_norm(a), DomainError);
}

TEST(PosNegSplit, Examples) {
  auto [p, n] = linalg::pos_neg_split(DenseMatrix::Constant(1, 1, -1.0));
  EXPECT_EQ(p(0, 0), 0.0);
  EXPECT_EQ(n(0, 0), 1.0);

  DenseMatrix a(2, 2);
  a << 1, -2, 3, 4;
  auto [ap, an] = linalg::pos_neg_split(a);
  DenseMatrix ep(2, 2), en(2, 2);
  ep << 1, 0, 3, 4;
  en << 0, 2, 0, 0;
  EXPECT_EQ(ap, ep);
  EXPECT_EQ(an, en);

  const DenseMatrix nonneg = oracle::random_matrix(3, 4, 5);
  auto [q, z] = linalg::pos_neg_split(nonneg);
  EXPECT_EQ(q, nonneg);
  EXPECT_TRUE(z.isZero(0.0));
}

TEST(PosNegSplit, RecompositionAndComplementarity) {
  for (int t = 0; t < 50; ++t) {
    const DenseMatrix a = oracle::random_matrix(4, 6, 200 + t, -1.0, 1.0);
    auto [p, n] = linalg::pos_neg_split(a);
    EXPECT_EQ(DenseMatrix(p - n), a);
    EXPECT_TRUE(p.cwiseProduct(n).isZero(0.0));
    EXPECT_GE(p.minCoeff(), 0.0);
    EXPECT_GE(n.minCoeff(), 0.0);
  }
}

TEST(TruncatedSvd, RankOneExact) {
  Vector u(3), v(4);
  u << 1, 2, 2;
  v << 1, 0, -1, 1;
  const DenseMatrix a = u * v.transpose();
  const auto s = linalg::truncated_svd(a, 1);
  EXPECT_NEAR(s.sigma[0], u.norm() * v.norm(), 1e-12);
  EXPECT_NEAR((a - s.reconstruct()).norm(), 0.0, 1e-12);
}

TEST(TruncatedSvd, FullRankReconstructs) {
  const DenseMatrix a = oracle::random_matrix(6, 9, 3, -1, 1);
  const auto s = linalg::truncated_svd(a, 6);
  EXPECT_LT((a - s.reconstruct()).norm(), 1e-8);
}

// Oracle: eigen-decomposition of AᵀA, independent of the SVD routine.
TEST(TruncatedSvd, ResidualMatchesEigenOracle) {
  const DenseMatrix a = oracle::random_matrix(20, 50, 17, -1, 1);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(a * a.transpose());
  Vector ev = eig.eigenvalues().reverse().cwiseMax(0.0);
  const double tail = std::sqrt(ev.tail(ev.size() - 5).sum());
  const auto s = linalg::truncated_svd(a, 5);
  const double res = (a - s.reconstruct()).norm();
  EXPECT_NEAR(res, tail, 1e-8 * std::max(1.0, tail));
  for (int k = 0; k < 5; ++k) EXPECT_NEAR(s.sigma[k] * s.sigma[k], ev[k], 1e-8 * ev[0]);
}

TEST(TruncatedSvd, Invariants) {
  const DenseMatrix a = oracle::random_matrix(12, 30, 21, -1, 1);
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t r = 1; r <= 12; ++r) {
    const auto s = linalg::truncated_svd(a, r);
    const auto rr = static_cast<Eigen::Index>(r);
    EXPECT_LT((s.u.transpose() * s.u - DenseMatrix::Identity(rr, rr)).norm(), 1e-10);
    EXPECT_LT((s.v.transpose() * s.v - DenseMatrix::Identity(rr, rr)).norm(), 1e-10);
    for (Eigen::Index k = 1; k < rr; ++k) EXPECT_GE(s.sigma[k - 1], s.sigma[k]);
    EXPECT_EQ(s.reduced().rows(), rr);
    EXPECT_EQ(s.reduced().cols(), a.cols());
    const double res = (a - s.reconstruct()).norm();
    EXPECT_LE(res, prev + 1e-12);
    prev = res;
  }
  EXPECT_THROW(linalg::truncated_svd(a, 0), DomainError);
  EXPECT_THROW(linalg::truncated_svd(a, 13), DomainError);
}

TEST(Mrsa, Examples) {
  Vector a(4);
  a << 0.3, 1.2, -0.4, 2.0;
  EXPECT_NEAR(linalg::mrsa(a, a), 0.0, 1e-7);
  EXPECT_NEAR(linalg::mrsa(a, Vector(-a)), 1.0, 1e-7);
  Vector x(2), y(2);
  x << 1, 2;
  y << 2, 4;
  EXPECT_NEAR(linalg::mrsa(x, y), 0.0, 1e-7);
  EXPECT_THROW(linalg::mrsa(Vector::Ones(3), a.head(3)), DomainError);
  EXPECT_THROW(linalg::mrsa(x, a), DomainError);
}

TEST(Mrsa, RangeSymmetryAffineInvariance) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> alpha(0.1, 10.0), beta(-5.0, 5.0);
  for (int t = 0; t < 200; ++t) {
    const DenseMatrix m = oracle::random_matrix(8, 2, 300 + t, -1, 1);
    const Vector a = m.col(0), b = m.col(1);
    const double v = linalg::mrsa(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_EQ(v, linalg::mrsa(b, a));
    const Vector ta = (alpha(rng) * a.array() + beta(rng)).matrix();
    EXPECT_NEAR(linalg::mrsa(ta, b), v, 1e-12);
  }
}

TEST(ProjectSimplex, Examples) {
  Vector on(3);
  on << 0.2, 0.3, 0.5;
  EXPECT_LT((linalg::project_simplex(on) - on).norm(), 1e-15);
  Vector v(2);
  v << 10, 0;
  EXPECT_EQ(linalg::project_simplex(v), Vector::Unit(2, 0));
  Vector w(3);
  w << 0.4, 0.1, -0.2;
  const Vector expected = oracle::simplex_projection_kkt(w);
  ASSERT_EQ(expected.size(), 3);
  EXPECT_LT((linalg::project_simplex(w) - expected).norm(), 1e-12);
}

TEST(ProjectSimplex, KktOracleAndIdempotence) {
  for (int t = 0; t < 300; ++t) {
    const Vector v = oracle::random_matrix(1 + t % 6, 1, 400 + t, -2, 2).col(0);
    const Vector x = linalg::project_simplex(v);
    const Vector ref = oracle::simplex_projection_kkt(v);
    ASSERT_EQ(ref.size(), v.size());
    EXPECT_LT((x - ref).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(x.sum(), 1.0, 1e-12);
    EXPECT_GE(x.minCoeff(), 0.0);
    EXPECT_LT((linalg::project_simplex(x) - x).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(SelectColumns, OrderAndRange) {
  const DenseMatrix a = oracle::random_matrix(3, 5, 1);
  const IndexSet idx{4, 0, 2};
  const DenseMatrix s = linalg::select_columns(a, idx);
  for (int k = 0; k < 3; ++k) EXPECT_EQ(s.col(k), a.col(static_cast<Eigen::Index>(idx[k])));
  const IndexSet bad{5};
  EXPECT_THROW(linalg::select_columns(a, bad), DomainError);
}
