#include "eeht/lp.hpp"

#include <algorithm>
#include <cmath>

namespace eeht::lp {

VerifyReport verify(const StandardLp& lp, const LpSolution& sol, const ToleranceConfig& tol) {
  lp.validate();
  if (sol.x.size() != lp.a.cols() || sol.y.size() != lp.a.rows()) {
    throw DomainError("verify: solution dimensions do not match the LP");
  }
  VerifyReport r;
  const Vector ax = lp.a * sol.x;
  r.primal_residual = (ax - lp.b).cwiseAbs().maxCoeff();
  r.negativity = std::max(0.0, -sol.x.minCoeff());
  const Vector reduced = lp.c - lp.a.transpose() * sol.y;
  r.dual_residual = std::max(0.0, -reduced.minCoeff());
  r.complementarity = sol.x.cwiseProduct(reduced).cwiseAbs().maxCoeff();
  r.primal_objective = lp.c.dot(sol.x);
  r.dual_objective = lp.b.dot(sol.y);
  r.duality_gap = std::abs(r.primal_objective - r.dual_objective);
  r.passed = r.primal_residual <= tol.feas_tol && r.negativity <= tol.feas_tol &&
             r.dual_residual <= tol.feas_tol &&
             r.duality_gap <= tol.gap_tol * std::max(1.0, std::abs(r.primal_objective));
  return r;
}

}  // namespace eeht::lp
