#pragma once

#include "eeht/linalg.hpp"
#include "eeht/lp.hpp"
#include "eeht/model.hpp"

#include <cstdint>
#include <optional>
#include <vector>

/// Row and column expansion: solves the Hottopixx model over all n columns
/// by repeatedly solving P(L,L) on a growing index set L and pricing the
/// columns outside L with the C1/C2 certificates.
namespace eeht::rce {

struct RceConfig {
  std::size_t r = 1;
  std::size_t lambda = 10;
  std::size_t mu = 100;
  double eps = 0.0;            // 0 selects 1e-7·max(1, u*) in every round
  std::size_t max_rounds = 0;  // 0 selects n
  std::uint64_t seed = 0;
  bool warm_start = true;
  lp::ToleranceConfig tol;

  /// Throws DomainError on r = 0, lambda = 0 or a negative eps.
  void validate() const;
};

struct RceRound {
  std::size_t ell = 0;
  double u_star = 0.0;
  double v_star = 0.0;
  std::size_t c1_violators = 0;
  std::size_t c2_violators = 0;  // 0 when C2 was not reached this round
  std::size_t lp_iterations = 0;
  double seconds = 0.0;
};

struct RceTrace {
  std::vector<RceRound> rounds;
  bool converged = false;
};

class RceError : public NumericalError {
 public:
  RceError(const std::string& what, RceTrace trace) : NumericalError(what), trace_(std::move(trace)) {}
  const RceTrace& trace() const { return trace_; }

 private:
  RceTrace trace_;
};

struct RceResult {
  DenseMatrix x;       // n×n, feasible for F(n,n)
  double objective = 0.0;  // ‖A − AX‖₁
  model::SubproblemSolution final_subproblem;
  std::vector<model::RjSolution> rjs;  // R_j for every j outside the final L
  RceTrace trace;
};

/// SPA picks, the λ nearest columns (Euclidean, self first, then by distance
/// and index) of each pick, and μ further columns drawn uniformly without
/// replacement from the rest with the configured seed. Sorted ascending.
IndexSet initial_index_set(const DenseMatrix& a, const RceConfig& cfg);

/// Runs RCE from `initial` (or initial_index_set when absent). Throws
/// RceError, carrying the rounds completed so far, if a subproblem fails or
/// max_rounds is exhausted.
RceResult rce_solve(const DenseMatrix& a, const RceConfig& cfg,
                    const std::optional<IndexSet>& initial = std::nullopt);

}  // namespace eeht::rce
