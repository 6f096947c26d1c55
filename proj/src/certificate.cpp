#include "eeht/model.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>

namespace eeht::model {

namespace {

struct Worst {
  double value = 0.0;
  std::string block;

  void note(double v, const char* name) {
    if (v > value) {
      value = v;
      block = name;
    }
  }
};

}  // namespace

CertificateReport certify_global(const DenseMatrix& a, const SubproblemSolution& sub,
                                 const std::vector<RjSolution>& rjs, double eps) {
  linalg::require_valid(a, "certify_global");
  const auto n = static_cast<std::size_t>(a.cols());
  const Eigen::Index nn = a.cols();
  const std::size_t ell = sub.l.size();
  const double r = static_cast<double>(sub.r);

  CertificateReport rep;
  rep.subproblem_objective = sub.u_star;

  // Primal point: X assembled from X* and Γ*, with F, G, u taken from the
  // residual split, so only the X ∈ F(n,n) block can be violated.
  const DenseMatrix x = assemble_full(sub, rjs, n);
  Worst primal;
  primal.note(std::abs(x.trace() - r), "primal: trace");
  for (Eigen::Index j = 0; j < nn; ++j) {
    for (Eigen::Index i = 0; i < nn; ++i) {
      const double v = x(i, j);
      primal.note(-v, "primal: nonnegativity");
      if (i != j) primal.note(v - x(i, i), "primal: off-diagonal bound");
    }
    primal.note(x(j, j) - 1.0, "primal: diagonal bound");
  }
  const DenseMatrix residual = a - a * x;
  rep.primal_objective = residual.cwiseAbs().colwise().sum().maxCoeff();
  rep.primal_violation = primal.value;

  // Dual point: Y = [Y*, O]Πᵀ, Z = Π[Z* Δ⁺; O O]Πᵀ, s and t padded, v = v*.
  DenseMatrix y = DenseMatrix::Zero(a.rows(), nn);
  Vector s = Vector::Zero(nn);
  Vector t = Vector::Zero(nn);
  std::vector<char> in_l(n, 0);
  for (std::size_t k = 0; k < ell; ++k) {
    const auto c = static_cast<Eigen::Index>(sub.l[k]);
    const auto kk = static_cast<Eigen::Index>(k);
    in_l[sub.l[k]] = 1;
    y.col(c) = sub.y_star.col(kk);
    s[c] = sub.s_star[kk];
    t[c] = sub.t_star[kk];
  }
  const double v = sub.v_star;

  // Z is stored row-major: row j of Z is column j of Zᵀ, needed per column of M.
  std::vector<lp::Triplet> zt;
  for (std::size_t p = 0; p < ell; ++p) {
    for (std::size_t q = 0; q < ell; ++q) {
      const double z = sub.z_star(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      if (z != 0.0) zt.emplace_back(static_cast<int>(sub.l[p]), static_cast<int>(sub.l[q]), z);
    }
  }
  for (Eigen::Index i = 0; i < nn; ++i) {
    if (in_l[static_cast<std::size_t>(i)]) continue;
    const Vector delta = sub.y_star.transpose() * a.col(i);
    for (std::size_t p = 0; p < ell; ++p) {
      const double z = std::max(delta[static_cast<Eigen::Index>(p)], 0.0);
      if (z != 0.0) zt.emplace_back(static_cast<int>(sub.l[p]), static_cast<int>(i), z);
    }
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor, int> z(nn, nn);
  z.setFromTriplets(zt.begin(), zt.end());
  Vector zcol = Vector::Zero(nn);
  for (Eigen::Index j = 0; j < z.outerSize(); ++j) {
    for (decltype(z)::InnerIterator it(z, j); it; ++it) zcol[it.col()] += it.value();
  }

  // M = AᵀY + vI − diag(t) − Zᵀ + diag(Zᵀ1) ≤ O, one column at a time.
  Worst dual;
  Vector col(nn);
  for (Eigen::Index j = 0; j < nn; ++j) {
    col.noalias() = a.transpose() * y.col(j);
    for (decltype(z)::InnerIterator it(z, j); it; ++it) col[it.col()] -= it.value();
    col[j] += v - t[j] + zcol[j];
    dual.note(col.maxCoeff(), "dual: reduced-cost block M");
    dual.note(y.col(j).cwiseAbs().maxCoeff() - s[j], "dual: |Y| <= s");
  }
  dual.note(s.sum() - 1.0, "dual: sum of s");
  dual.note(-s.minCoeff(), "dual: s sign");
  dual.note(-t.minCoeff(), "dual: t sign");
  if (z.nonZeros() > 0) {
    dual.note(-Eigen::Map<const Vector>(z.valuePtr(), z.nonZeros()).minCoeff(), "dual: Z sign");
  }
  rep.dual_objective = a.cwiseProduct(y).sum() + r * v - t.sum();
  rep.dual_violation = dual.value;

  const double gap_tol = 1e-6 * std::max(1.0, std::abs(sub.u_star));
  if (primal.value > eps) {
    rep.violated_block = primal.block;
  } else if (dual.value > eps) {
    rep.violated_block = dual.block;
  } else if (std::abs(rep.primal_objective - rep.dual_objective) > gap_tol) {
    rep.violated_block = "objective gap";
  }
  rep.passed = rep.violated_block.empty();
  return rep;
}

}  // namespace eeht::model
