#pragma once

#include "eeht/linalg.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

/// Equality-form linear programming:
///
///   min c^T x  s.t.  A x = b,  x >= 0        (primal)
///   max b^T y  s.t.  A^T y <= c              (dual)
///
/// The solver is a two-phase revised primal simplex over a sparse LU of the
/// basis with product-form updates. Callers that know a primal feasible basis
/// can pass it in and skip phase 1.
namespace eeht::lp {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet = Eigen::Triplet<double, int>;

struct StandardLp {
  Vector c;        // n
  SparseMatrix a;  // m x n, compressed
  Vector b;        // m

  std::size_t rows() const { return static_cast<std::size_t>(a.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(a.cols()); }

  /// Throws DomainError on empty dimensions, size mismatch or non-finite data.
  void validate() const;
};

enum class Status { Optimal, Infeasible, Unbounded, IterLimit };

const char* to_string(Status s);

struct ToleranceConfig {
  double feas_tol = 1e-9;
  double gap_tol = 1e-7;
  double opt_tol = 1e-10;    // reduced-cost threshold for pricing
  double pivot_tol = 1e-9;   // smallest acceptable |alpha| in the ratio test
  std::size_t max_pivots = 0;   // 0 selects 50 * (m + n)
  std::size_t bland_after = 0;  // consecutive degenerate pivots; 0 selects 10 * (m + n)
  std::size_t refactor_every = 96;
  double time_limit_seconds = std::numeric_limits<double>::infinity();
};

struct LpSolution {
  Vector x;  // n
  Vector y;  // m
  double objective = 0.0;
  Status status = Status::IterLimit;
  /// Infeasible: Farkas vector y with A^T y <= 0 and b^T y > 0.
  /// Unbounded: direction d >= 0 with A d = 0 and c^T d < 0.
  Vector ray;
  /// Basic column per row. Values >= n denote the phase-1 artificial of
  /// row (value - n), left in place on a redundant row.
  std::vector<int> basis;
  std::size_t iterations = 0;
  bool time_limited = false;
};

/// Solves `lp`. `warm_basis`, when non-empty, lists m basic columns, where
/// a value n + i stands for the artificial of row i (signed so that it is
/// nonnegative). It is used as the starting point if it factorizes and every
/// basic value is nonnegative, with phase 1 run from it when an artificial
/// is positive; otherwise it is silently ignored.
LpSolution solve(const StandardLp& lp, const ToleranceConfig& tol = {},
                 std::span<const int> warm_basis = {});

struct VerifyReport {
  double primal_residual = 0.0;   // ||Ax - b||_inf
  double negativity = 0.0;        // max(-x)^+
  double dual_residual = 0.0;     // max (A^T y - c)^+
  double duality_gap = 0.0;       // |c^T x - b^T y|
  double complementarity = 0.0;   // max_i |x_i (c - A^T y)_i|
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  bool passed = false;
};

/// Independent optimality audit of a primal/dual pair.
VerifyReport verify(const StandardLp& lp, const LpSolution& sol, const ToleranceConfig& tol = {});

}  // namespace eeht::lp
