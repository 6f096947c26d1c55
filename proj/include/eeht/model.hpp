#pragma once

#include "eeht/linalg.hpp"
#include "eeht/lp.hpp"

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

/// Hottopixx subproblems.
///
/// For index sets L ⊆ M of the columns of A (ℓ = |L|, m = |M|), P(L,M) is
///
///   min u  s.t.  A(M)Π − A(L)X = F − G,
///                Σ_k F(k,j) + G(k,j) ≤ u          (j < m)
///                F, G ≥ 0,  X ∈ F(ℓ, m)
///
/// where Π orders M as (L, M∖L) and F(ℓ, m) is the set of X with trace r
/// over the leading ℓ×ℓ block and 0 ≤ X(i,j) ≤ X(i,i) ≤ 1.
namespace eeht::model {

/// Frozen variable and row ordering of the standard-form P(L,M).
///
/// Variables: vec X (ℓ×m), vec F (d×m), vec G (d×m), u, σ (m), τ (ℓ·(m−1)),
/// δ (ℓ). Rows: E (d×m), S (m), T (1), Z (ℓ·(m−1)), Dg (ℓ).
///
///   E(k,j):  (A(L)X)(k,j) + F(k,j) − G(k,j) = A(M)Π(k,j)
///   S(j):    Σ_k F(k,j) + G(k,j) + σ_j − u = 0
///   T:       Σ_i X(i,i) = r
///   Z(i,j):  X(i,j) − X(i,i) + τ_ij = 0          (j ≠ i)
///   Dg(i):   X(i,i) + δ_i = 1
///
/// Every matrix block is vectorized column-major. The dual blocks of D(L,M)
/// are read off the row multipliers y as Y = y_E, s_j = −y_S(j), v = y_T,
/// Z(j,i) = −y_Z(i,j) and t_i = −y_Dg(i).
struct PrimalLayout {
  std::size_t d = 0;
  std::size_t l = 0;
  std::size_t m = 0;

  std::size_t x(std::size_t i, std::size_t j) const { return i + j * l; }
  std::size_t f(std::size_t k, std::size_t j) const { return l * m + k + j * d; }
  std::size_t g(std::size_t k, std::size_t j) const { return l * m + d * m + k + j * d; }
  std::size_t u() const { return l * m + 2 * d * m; }
  std::size_t sigma(std::size_t j) const { return u() + 1 + j; }
  std::size_t tau(std::size_t i, std::size_t j) const { return sigma(m) + z_offset(i, j); }
  std::size_t delta(std::size_t i) const { return sigma(m) + l * (m - 1) + i; }
  std::size_t num_vars() const { return delta(l); }

  std::size_t row_e(std::size_t k, std::size_t j) const { return k + j * d; }
  std::size_t row_s(std::size_t j) const { return d * m + j; }
  std::size_t row_t() const { return d * m + m; }
  std::size_t row_z(std::size_t i, std::size_t j) const { return row_t() + 1 + z_offset(i, j); }
  std::size_t row_dg(std::size_t i) const { return row_t() + 1 + l * (m - 1) + i; }
  std::size_t num_rows() const { return row_dg(l); }

  /// Position of the pair (i, j), j ≠ i, within the τ and Z blocks.
  std::size_t z_offset(std::size_t i, std::size_t j) const {
    return i * (m - 1) + (j < i ? j : j - 1);
  }
};

/// Builds P(L,M) in standard form. Throws DomainError if an index is out of
/// range or repeated, L ⊄ M, or r is not in [1, ℓ].
lp::StandardLp build_primal(const DenseMatrix& a, const IndexSet& l, const IndexSet& m, std::size_t r);

/// The column order (L, M∖L) that Π induces on M.
IndexSet block_order(const IndexSet& l, const IndexSet& m);

/// LP failure surfaced by a subproblem solve.
class SolverError : public NumericalError {
 public:
  SolverError(const std::string& what, lp::Status status, bool time_limited)
      : NumericalError(what), status_(status), time_limited_(time_limited) {}
  lp::Status status() const { return status_; }
  bool time_limited() const { return time_limited_; }

 private:
  lp::Status status_;
  bool time_limited_;
};

/// Optimal primal and dual blocks of P(L,L) / D(L,L).
struct SubproblemSolution {
  IndexSet l;
  std::size_t r = 0;
  DenseMatrix x_star;  // ℓ×ℓ
  double u_star = 0.0;
  DenseMatrix y_star;  // d×ℓ
  DenseMatrix z_star;  // ℓ×ℓ, zero diagonal
  Vector s_star;       // ℓ
  Vector t_star;       // ℓ
  double v_star = 0.0;
  double dual_objective = 0.0;  // ⟨A(L),Y*⟩ + r·v* − 1ᵀt*
  std::size_t iterations = 0;
  std::vector<int> basis;  // final LP basis in PrimalLayout indexing
};

struct RjSolution;

/// Data from a previous round used to seed the starting basis.
struct WarmStart {
  const SubproblemSolution* previous = nullptr;
  const std::vector<RjSolution>* rjs = nullptr;  // R_j of the previous round
};

/// Solves P(L,L) and recovers the D(L,L) blocks from the row multipliers.
///
/// With a WarmStart whose subproblem index set is a prefix of `l`, the
/// previous optimal basis is extended by the R_j bases of the appended
/// columns; otherwise a crash basis is built around the r columns with the
/// largest previous diagonal (or SPA picks without a previous round).
/// Throws SolverError on any non-optimal LP status.
SubproblemSolution solve_subproblem(const DenseMatrix& a, const IndexSet& l, std::size_t r,
                                    const lp::ToleranceConfig& tol = {}, const WarmStart& warm = {});

/// ⟨A(L),Y⟩ + r·v − 1ᵀt evaluated on the stored blocks.
double dual_objective(const DenseMatrix& a, const SubproblemSolution& sub);

/// Largest violation of the D(L,L) constraints by the stored dual blocks.
double dual_violation(const DenseMatrix& a, const SubproblemSolution& sub);

/// Running record of every solve_subproblem call in this process.
struct DualityAudit {
  std::size_t solves = 0;
  std::size_t gap_violations = 0;  // |u* − dual| > 1e-7·max(1, u*)
  std::size_t sign_violations = 0; // v* > 1e-9
  double max_relative_gap = 0.0;
  double max_v_star = -std::numeric_limits<double>::infinity();
};

DualityAudit duality_audit();
void reset_duality_audit();

/// Optimum of R_j(L, X*): min ‖a_j − A(L)γ‖₁ over 0 ≤ γ ≤ diag_x.
struct RjSolution {
  std::size_t j = 0;
  Vector gamma;  // ℓ
  double opt_value = 0.0;
  /// Final LP basis coded against L: γ_i → i, f_k → ℓ+k, g_k → ℓ+d+k and
  /// the slack of γ_i ≤ diag_x(i) → ℓ+2d+i. Empty if unavailable.
  std::vector<int> basis;
};

RjSolution solve_rj(const DenseMatrix& a, const IndexSet& l, std::size_t j, const Vector& diag_x,
                    const lp::ToleranceConfig& tol = {});

/// R_j for every j ∉ L, ascending in j. Runs on the shared worker pool.
std::vector<RjSolution> solve_rj_all(const DenseMatrix& a, const SubproblemSolution& sub,
                                     const lp::ToleranceConfig& tol = {});

/// Expansion tolerance for a subproblem optimum: 1e-7·max(1, u*).
double default_eps(double u_star);

struct CheckResult {
  bool holds = true;
  IndexSet violators;
};

/// C1: flags j with opt(R_j) > u* + eps.
CheckResult check_c1(const SubproblemSolution& sub, const std::vector<RjSolution>& rjs, double eps);

/// C2: flags j ∉ L with v* + Σ((Y*)ᵀa_j)⁺ > eps.
CheckResult check_c2(const SubproblemSolution& sub, const DenseMatrix& a, double eps);

/// Π[X* Γ*; O O]Πᵀ as an n×n matrix in natural column order.
DenseMatrix assemble_full(const SubproblemSolution& sub, const std::vector<RjSolution>& rjs, std::size_t n);

struct CertificateReport {
  bool passed = false;
  std::string violated_block;  // empty when passed
  double subproblem_objective = 0.0;
  double primal_objective = 0.0;  // ‖A − AX‖₁ at the constructed primal point
  double dual_objective = 0.0;    // D(N,N) objective at the constructed dual point
  double primal_violation = 0.0;
  double dual_violation = 0.0;
};

/// Builds the extended primal point (X, R⁺, R⁻, ‖R‖₁) and dual point
/// (Y, Z, s, t, v) of P(N,N)/D(N,N) from the subproblem, checks both for
/// feasibility and compares their objectives.
CertificateReport certify_global(const DenseMatrix& a, const SubproblemSolution& sub,
                                 const std::vector<RjSolution>& rjs, double eps);

}  // namespace eeht::model
