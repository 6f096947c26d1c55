#pragma once

// Test-side reference implementations. None of these call into the
// library's solvers except where noted; they trade speed for obviousness.

#include "eeht/linalg.hpp"
#include "eeht/lp.hpp"

#include <cstdint>
#include <vector>

namespace oracle {

using eeht::DenseMatrix;
using eeht::IndexSet;
using eeht::Vector;

/// Uniform [lo, hi) matrix from a seeded mt19937_64.
DenseMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed, double lo = 0.0,
                          double hi = 1.0);

/// Max column sum of |a| by explicit loops.
double column_sum_norm(const DenseMatrix& a);

/// Minimum of cᵀx over all basic feasible solutions, by enumerating every
/// choice of m columns. +inf when no basis is feasible.
double lp_vertex_enumeration(const eeht::lp::StandardLp& lp);

/// Projection onto the probability simplex by enumerating supports and
/// checking the KKT conditions.
Vector simplex_projection_kkt(const Vector& v);

/// min ‖a − B h‖² over the simplex, by enumerating supports and solving
/// each equality-constrained least-squares KKT system.
double simplex_ls_active_set(const DenseMatrix& b, const Vector& a);

/// min ‖a_j − A(L)γ‖₁ over 0 ≤ γ ≤ diag. The objective is piecewise linear,
/// so a minimizer sits where |L| of the residual or bound hyperplanes meet;
/// every such intersection is enumerated.
double rj_vertex_search(const DenseMatrix& a, const IndexSet& l, std::size_t j, const Vector& diag);

/// Cost of the best assignment over all r! permutations.
double best_permutation_cost(const DenseMatrix& cost, std::vector<std::size_t>* perm = nullptr);

struct BruteCluster {
  std::size_t anchor = 0;
  IndexSet members;
  double diameter = 0.0;
};

/// Enumerates every prefix of every Ω_i and returns the minimum-diameter
/// one with score > r/(r+1); ties by anchor, then by prefix length.
/// Diameter is recomputed as the max member distance. found = false if none.
bool min_diam_brute(const DenseMatrix& a, const Vector& p, std::size_t r, BruteCluster& out);

/// H(N,N) written from scratch as one LP in a different variable order
/// (R⁺, R⁻, X, u, slacks) and solved with eeht::lp::solve.
double direct_hottopixx(const DenseMatrix& a, std::size_t r);

/// Noiseless or noisy separable test matrix A = W[I, H̄]Π + V with Dirichlet(1)
/// mixtures and a seeded placement; independent of datagen.
struct Separable {
  DenseMatrix a;
  DenseMatrix w;
  IndexSet pure;
};
Separable separable(Eigen::Index d, Eigen::Index n, Eigen::Index r, double noise, std::uint64_t seed);

}  // namespace oracle
