#pragma once

#include "eeht/linalg.hpp"

#include <string>
#include <vector>

namespace eeht::evalkit {

struct MatchReport {
  std::vector<std::size_t> permutation;  // est column k is matched to refs column permutation[k]
  std::vector<double> per_endmember_mrsa;
  double average_mrsa = 0.0;
};

/// Optimal one-to-one matching of estimated to reference columns under MRSA.
/// Exhaustive for r ≤ 8, Hungarian above. Throws DomainError on mismatched
/// shapes or a constant column.
MatchReport match_mrsa(const DenseMatrix& est, const DenseMatrix& refs);

/// Minimum-cost assignment on a square cost matrix; result[row] = column.
std::vector<std::size_t> solve_assignment(const DenseMatrix& cost);

struct AbundanceOptions {
  double tol = 1e-9;
  std::size_t max_iter = 10000;
};

struct AbundanceResult {
  DenseMatrix h;            // r×n, columns on the simplex
  double objective = 0.0;   // ‖A − A(I)H‖_F²
  bool converged = true;    // false if any column hit max_iter
  std::size_t iterations = 0;  // maximum over columns
};

/// Q(A, I): min ‖A − A(I)H‖_F² s.t. 1ᵀH = 1ᵀ, H ≥ O, column by column with
/// accelerated projected gradient (step 1/σ_max(A(I))²) and adaptive
/// restart.
AbundanceResult abundance(const DenseMatrix& a, const IndexSet& indices, const AbundanceOptions& opt = {});

/// Angle between the mean-removed directions of every column pair, computed
/// as 2·atan2(‖u−v‖, ‖u+v‖)/π on unit vectors, which is exact at zero.
struct DensityProfile {
  Vector rho;
  double phi = 0.0;
};

DensityProfile neighborhood_density(const DenseMatrix& a, double phi);

/// Indices with rho > omega, ascending.
IndexSet filter_isolated(const DensityProfile& profile, double omega);
IndexSet filter_isolated(const DenseMatrix& a, double phi, double omega);

/// Counts of rho over [0, 1] in bins of `bin_width`; bins are right-open
/// except the last.
std::vector<std::size_t> density_histogram(const Vector& rho, double bin_width = 0.01);

/// Binary P5 graymap of one abundance row. Pixel j sits at row j % height,
/// column j / height; values are clamped to [0, 1] and scaled to 0..255.
std::string encode_pgm(const Vector& values, std::size_t width, std::size_t height);

}  // namespace eeht::evalkit
