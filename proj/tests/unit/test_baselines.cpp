#include "eeht/baselines.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

using namespace eeht;

TEST(Spa, IdentityTiesByIndex) {
  EXPECT_EQ(baselines::spa(DenseMatrix::Identity(3, 3), 2), (IndexSet{0, 1}));
}

// Two steps by hand: norms (1, 1, √0.5) pick column 0; after projecting out
// e₁ the residual norms are (0, 1, 0.5), picking column 1.
TEST(Spa, TwoStepManualOracle) {
  DenseMatrix a(2, 3);
  a << 1, 0, 0.5, 0, 1, 0.5;
  std::vector<double> norms;
  EXPECT_EQ(baselines::spa(a, 2, &norms), (IndexSet{0, 1}));
  ASSERT_EQ(norms.size(), 2u);
  EXPECT_NEAR(norms[0], 1.0, 1e-15);
  EXPECT_NEAR(norms[1], 1.0, 1e-15);
}

TEST(Spa, NoiselessSeparableRecovery) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = oracle::separable(12, 80, 5, 0.0, 500 + seed);
    IndexSet got = baselines::spa(inst.a, 5);
    IndexSet want = inst.pure;
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    EXPECT_EQ(got, want) << "seed " << seed;
  }
}

TEST(Spa, PermutationEquivariance) {
  std::mt19937_64 rng(3);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DenseMatrix a = oracle::random_matrix(6, 15, 600 + seed);
    std::vector<std::size_t> perm(15);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    DenseMatrix b(6, 15);
    for (std::size_t k = 0; k < 15; ++k) b.col(static_cast<Eigen::Index>(perm[k])) = a.col(static_cast<Eigen::Index>(k));
    const IndexSet sa = baselines::spa(a, 4);
    const IndexSet sb = baselines::spa(b, 4);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(sb[k], perm[sa[k]]);
  }
}

TEST(Spa, ResidualNormsNonincreasing) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const DenseMatrix a = oracle::random_matrix(8, 30, 700 + seed, -1, 1);
    std::vector<double> norms;
    const IndexSet s = baselines::spa(a, 8, &norms);
    EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 8u);
    for (std::size_t k = 1; k < norms.size(); ++k) EXPECT_LE(norms[k], norms[k - 1] * (1 + 1e-12));
  }
}

TEST(Spa, Errors) {
  EXPECT_THROW(baselines::spa(DenseMatrix::Identity(3, 3), 4), DomainError);
  EXPECT_THROW(baselines::spa(DenseMatrix::Identity(3, 3), 0), DomainError);
  EXPECT_THROW(baselines::spa(DenseMatrix::Zero(3, 3), 1), DomainError);
  DenseMatrix rank1 = DenseMatrix::Ones(3, 4);
  EXPECT_THROW(baselines::spa(rank1, 2), NumericalError);
}
