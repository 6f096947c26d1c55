#include "eeht/model.hpp"

#include "eeht/baselines.hpp"
#include "eeht/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

namespace eeht::model {

namespace {

void require_indices(const IndexSet& idx, std::size_t n, const char* what) {
  std::unordered_set<std::size_t> seen;
  for (std::size_t i : idx) {
    if (i >= n) throw DomainError(std::string(what) + ": index out of range");
    if (!seen.insert(i).second) throw DomainError(std::string(what) + ": repeated index");
  }
}

IndexSet complement(const IndexSet& l, std::size_t n) {
  std::vector<char> in(n, 0);
  for (std::size_t i : l) in[i] = 1;
  IndexSet out;
  out.reserve(n - l.size());
  for (std::size_t j = 0; j < n; ++j) {
    if (!in[j]) out.push_back(j);
  }
  return out;
}

// Indices of the r largest scores, ties broken by position.
std::vector<std::size_t> top_r(std::span<const double> score, std::size_t r) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t p, std::size_t q) { return score[p] > score[q]; });
  order.resize(r);
  return order;
}

std::vector<std::size_t> crash_support(const DenseMatrix& al, const IndexSet& l, std::size_t r,
                                       const SubproblemSolution* previous) {
  if (previous) {
    std::vector<double> score(l.size(), 0.0);
    for (std::size_t q = 0; q < previous->l.size(); ++q) {
      const auto it = std::find(l.begin(), l.end(), previous->l[q]);
      if (it != l.end()) {
        score[static_cast<std::size_t>(it - l.begin())] =
            previous->x_star(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(q));
      }
    }
    return top_r(score, r);
  }
  try {
    return baselines::spa(al, r);
  } catch (const std::exception&) {
    std::vector<std::size_t> first(r);
    std::iota(first.begin(), first.end(), 0);
    return first;
  }
}

// Columns of L whose R_j box is open; the others are fixed at zero.
std::vector<std::size_t> rj_support(const Vector& cap) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < cap.size(); ++i) {
    if (cap[i] > 0.0) out.push_back(static_cast<std::size_t>(i));
  }
  return out;
}

enum class Block { X, F, G, U, Sigma, Tau, Delta };

struct Slot {
  Block block;
  std::size_t i = 0;
  std::size_t j = 0;
};

Slot decode_var(const PrimalLayout& lay, std::size_t v) {
  const std::size_t lm = lay.l * lay.m;
  const std::size_t dm = lay.d * lay.m;
  if (v < lm) return {Block::X, v % lay.l, v / lay.l};
  v -= lm;
  if (v < dm) return {Block::F, v % lay.d, v / lay.d};
  v -= dm;
  if (v < dm) return {Block::G, v % lay.d, v / lay.d};
  v -= dm;
  if (v == 0) return {Block::U};
  v -= 1;
  if (v < lay.m) return {Block::Sigma, 0, v};
  v -= lay.m;
  if (v < lay.l * (lay.m - 1)) {
    const std::size_t i = v / (lay.m - 1);
    const std::size_t jj = v % (lay.m - 1);
    return {Block::Tau, i, jj < i ? jj : jj + 1};
  }
  return {Block::Delta, v - lay.l * (lay.m - 1)};
}

std::size_t encode_var(const PrimalLayout& lay, const Slot& s) {
  switch (s.block) {
    case Block::X: return lay.x(s.i, s.j);
    case Block::F: return lay.f(s.i, s.j);
    case Block::G: return lay.g(s.i, s.j);
    case Block::U: return lay.u();
    case Block::Sigma: return lay.sigma(s.j);
    case Block::Tau: return lay.tau(s.i, s.j);
    case Block::Delta: return lay.delta(s.i);
  }
  return 0;
}

// Rows reuse Slot with E ↔ F, S ↔ Sigma, T ↔ U, Z ↔ Tau, Dg ↔ Delta.
Slot decode_row(const PrimalLayout& lay, std::size_t row) {
  const std::size_t dm = lay.d * lay.m;
  if (row < dm) return {Block::F, row % lay.d, row / lay.d};
  row -= dm;
  if (row < lay.m) return {Block::Sigma, 0, row};
  row -= lay.m;
  if (row == 0) return {Block::U};
  row -= 1;
  if (row < lay.l * (lay.m - 1)) {
    const std::size_t i = row / (lay.m - 1);
    const std::size_t jj = row % (lay.m - 1);
    return {Block::Tau, i, jj < i ? jj : jj + 1};
  }
  return {Block::Delta, row - lay.l * (lay.m - 1)};
}

std::size_t encode_row(const PrimalLayout& lay, const Slot& s) {
  switch (s.block) {
    case Block::F: return lay.row_e(s.i, s.j);
    case Block::Sigma: return lay.row_s(s.j);
    case Block::U: return lay.row_t();
    case Block::Tau: return lay.row_z(s.i, s.j);
    case Block::Delta: return lay.row_dg(s.i);
    default: return 0;
  }
}

// Extends the previous optimal basis of P(L,L) to P(L',L') with L' = L ++ K.
// Rows of the old problem keep their basis, so the old values persist. For
// each appended column j the optimal R_j basis covers its E rows and the Z
// rows against L; the new X rows are covered by their τ and δ slacks. When
// opt(R_j) exceeds u*, the S row of j starts on its artificial and phase 1
// raises u. Returns an empty vector when the pieces do not fit.
std::vector<int> extend_basis(const PrimalLayout& lay, const WarmStart& warm, const IndexSet& l) {
  const SubproblemSolution& prev = *warm.previous;
  const std::size_t l0 = prev.l.size();
  if (prev.basis.empty() || l0 > l.size() || !std::equal(prev.l.begin(), prev.l.end(), l.begin())) return {};
  const PrimalLayout old{lay.d, l0, l0};
  const std::size_t n_old = old.num_vars();
  const std::size_t n_new = lay.num_vars();

  std::vector<int> basis;
  basis.reserve(lay.num_rows());
  for (int v : prev.basis) {
    const auto vv = static_cast<std::size_t>(v);
    if (vv < n_old) basis.push_back(static_cast<int>(encode_var(lay, decode_var(old, vv))));
    else basis.push_back(static_cast<int>(n_new + encode_row(lay, decode_row(old, vv - n_old))));
  }

  std::unordered_map<std::size_t, const RjSolution*> by_j;
  for (const RjSolution& rj : *warm.rjs) by_j[rj.j] = &rj;
  const Vector cap = prev.x_star.diagonal().cwiseMax(0.0).cwiseMin(1.0);
  const std::vector<std::size_t> support = rj_support(cap);
  std::vector<char> in_support(l0, 0);
  for (std::size_t i : support) in_support[i] = 1;

  for (std::size_t jp = l0; jp < l.size(); ++jp) {
    const auto it = by_j.find(l[jp]);
    if (it == by_j.end() || it->second->basis.size() != lay.d + support.size()) return {};
    const RjSolution& rj = *it->second;
    for (int code : rj.basis) {
      const auto c = static_cast<std::size_t>(code);
      if (c < l0) basis.push_back(static_cast<int>(lay.x(c, jp)));
      else if (c < l0 + lay.d) basis.push_back(static_cast<int>(lay.f(c - l0, jp)));
      else if (c < l0 + 2 * lay.d) basis.push_back(static_cast<int>(lay.g(c - l0 - lay.d, jp)));
      else basis.push_back(static_cast<int>(lay.tau(c - l0 - 2 * lay.d, jp)));
    }
    for (std::size_t i = 0; i < l0; ++i) {
      if (!in_support[i]) basis.push_back(static_cast<int>(lay.tau(i, jp)));
    }
    if (rj.opt_value > prev.u_star) basis.push_back(static_cast<int>(n_new + lay.row_s(jp)));
    else basis.push_back(static_cast<int>(lay.sigma(jp)));
  }
  for (std::size_t kp = l0; kp < l.size(); ++kp) {
    for (std::size_t j = 0; j < l.size(); ++j) {
      if (j != kp) basis.push_back(static_cast<int>(lay.tau(kp, j)));
    }
    basis.push_back(static_cast<int>(lay.delta(kp)));
  }
  if (basis.size() != lay.num_rows()) return {};
  return basis;
}

// Feasible, nonsingular starting basis for P(L,L): X = Σ_{i∈S} e_i e_iᵀ for
// a support S of size r, residual splits in F/G, and slacks elsewhere. The
// basis is triangular up to a row permutation.
std::vector<int> crash_basis(const PrimalLayout& lay, const DenseMatrix& al,
                             const std::vector<std::size_t>& support) {
  const std::size_t l = lay.l;
  std::vector<char> in_s(l, 0);
  for (std::size_t i : support) in_s[i] = 1;

  std::vector<int> basis;
  basis.reserve(lay.num_rows());
  Vector colsum = Vector::Zero(static_cast<Eigen::Index>(l));
  for (std::size_t j = 0; j < l; ++j) {
    for (std::size_t k = 0; k < lay.d; ++k) {
      const double res = in_s[j] ? 0.0 : al(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
      basis.push_back(static_cast<int>(res >= 0.0 ? lay.f(k, j) : lay.g(k, j)));
      colsum[static_cast<Eigen::Index>(j)] += std::abs(res);
    }
  }
  Eigen::Index jstar = 0;
  colsum.maxCoeff(&jstar);
  for (std::size_t j = 0; j < l; ++j) {
    if (static_cast<Eigen::Index>(j) != jstar) basis.push_back(static_cast<int>(lay.sigma(j)));
  }
  basis.push_back(static_cast<int>(lay.u()));
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      if (j != i) basis.push_back(static_cast<int>(lay.tau(i, j)));
    }
  }
  for (std::size_t i = 0; i < l; ++i) {
    if (in_s[i]) basis.push_back(static_cast<int>(lay.x(i, i)));
    else basis.push_back(static_cast<int>(lay.delta(i)));
  }
  basis.push_back(static_cast<int>(lay.delta(support.front())));
  return basis;
}

std::mutex audit_mutex;
DualityAudit audit_state;

void record_audit(const SubproblemSolution& sub) {
  const double scale = std::max(1.0, std::abs(sub.u_star));
  const double rel = std::abs(sub.u_star - sub.dual_objective) / scale;
  std::lock_guard lock(audit_mutex);
  ++audit_state.solves;
  if (rel > 1e-7) ++audit_state.gap_violations;
  if (sub.l.size() >= sub.r && sub.v_star > 1e-9) ++audit_state.sign_violations;
  audit_state.max_relative_gap = std::max(audit_state.max_relative_gap, rel);
  audit_state.max_v_star = std::max(audit_state.max_v_star, sub.v_star);
}

}  // namespace

IndexSet block_order(const IndexSet& l, const IndexSet& m) {
  std::unordered_set<std::size_t> in_l(l.begin(), l.end());
  IndexSet out = l;
  for (std::size_t j : m) {
    if (!in_l.count(j)) out.push_back(j);
  }
  return out;
}

lp::StandardLp build_primal(const DenseMatrix& a, const IndexSet& l, const IndexSet& m, std::size_t r) {
  linalg::require_valid(a, "build_primal");
  const auto n = static_cast<std::size_t>(a.cols());
  require_indices(l, n, "build_primal");
  require_indices(m, n, "build_primal");
  {
    std::unordered_set<std::size_t> in_m(m.begin(), m.end());
    for (std::size_t i : l) {
      if (!in_m.count(i)) throw DomainError("build_primal: L must be a subset of M");
    }
  }
  if (r < 1 || r > l.size()) throw DomainError("build_primal: r must lie in [1, |L|]");

  const IndexSet order = block_order(l, m);
  PrimalLayout lay{static_cast<std::size_t>(a.rows()), l.size(), m.size()};
  const std::size_t d = lay.d;

  std::vector<lp::Triplet> t;
  t.reserve(lay.l * lay.m * (d + 1) + 2 * d * lay.m + 3 * lay.m + 3 * lay.l);
  auto put = [&](std::size_t row, std::size_t col, double v) {
    t.emplace_back(static_cast<int>(row), static_cast<int>(col), v);
  };

  for (std::size_t j = 0; j < lay.m; ++j) {
    for (std::size_t i = 0; i < lay.l; ++i) {
      const auto ci = static_cast<Eigen::Index>(l[i]);
      for (std::size_t k = 0; k < d; ++k) {
        const double v = a(static_cast<Eigen::Index>(k), ci);
        if (v != 0.0) put(lay.row_e(k, j), lay.x(i, j), v);
      }
    }
    for (std::size_t k = 0; k < d; ++k) {
      put(lay.row_e(k, j), lay.f(k, j), 1.0);
      put(lay.row_e(k, j), lay.g(k, j), -1.0);
      put(lay.row_s(j), lay.f(k, j), 1.0);
      put(lay.row_s(j), lay.g(k, j), 1.0);
    }
    put(lay.row_s(j), lay.sigma(j), 1.0);
    put(lay.row_s(j), lay.u(), -1.0);
  }
  for (std::size_t i = 0; i < lay.l; ++i) {
    put(lay.row_t(), lay.x(i, i), 1.0);
    for (std::size_t j = 0; j < lay.m; ++j) {
      if (j == i) continue;
      put(lay.row_z(i, j), lay.x(i, j), 1.0);
      put(lay.row_z(i, j), lay.x(i, i), -1.0);
      put(lay.row_z(i, j), lay.tau(i, j), 1.0);
    }
    put(lay.row_dg(i), lay.x(i, i), 1.0);
    put(lay.row_dg(i), lay.delta(i), 1.0);
  }

  lp::StandardLp out;
  const auto rows = static_cast<Eigen::Index>(lay.num_rows());
  const auto cols = static_cast<Eigen::Index>(lay.num_vars());
  out.a.resize(rows, cols);
  out.a.setFromTriplets(t.begin(), t.end());
  out.a.makeCompressed();
  out.c = Vector::Zero(cols);
  out.c[static_cast<Eigen::Index>(lay.u())] = 1.0;
  out.b = Vector::Zero(rows);
  for (std::size_t j = 0; j < lay.m; ++j) {
    for (std::size_t k = 0; k < d; ++k) {
      out.b[static_cast<Eigen::Index>(lay.row_e(k, j))] =
          a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(order[j]));
    }
  }
  out.b[static_cast<Eigen::Index>(lay.row_t())] = static_cast<double>(r);
  for (std::size_t i = 0; i < lay.l; ++i) out.b[static_cast<Eigen::Index>(lay.row_dg(i))] = 1.0;
  return out;
}

SubproblemSolution solve_subproblem(const DenseMatrix& a, const IndexSet& l, std::size_t r,
                                    const lp::ToleranceConfig& tol, const WarmStart& warm) {
  const lp::StandardLp prob = build_primal(a, l, l, r);
  const PrimalLayout lay{static_cast<std::size_t>(a.rows()), l.size(), l.size()};
  const DenseMatrix al = linalg::select_columns(a, l);

  lp::LpSolution sol;
  bool solved = false;
  if (warm.previous && warm.rjs) {
    const std::vector<int> start = extend_basis(lay, warm, l);
    if (!start.empty()) {
      sol = lp::solve(prob, tol, start);
      solved = sol.status == lp::Status::Optimal;
    }
  }
  if (!solved) {
    const std::vector<int> start = crash_basis(lay, al, crash_support(al, l, r, warm.previous));
    sol = lp::solve(prob, tol, start);
  }
  if (sol.status != lp::Status::Optimal) {
    throw SolverError(std::string("solve_subproblem: LP returned ") + lp::to_string(sol.status),
                      sol.status, sol.time_limited);
  }

  const std::size_t ell = l.size();
  const auto el = static_cast<Eigen::Index>(ell);
  SubproblemSolution out;
  out.l = l;
  out.r = r;
  out.iterations = sol.iterations;
  out.basis = sol.basis;
  out.u_star = sol.x[static_cast<Eigen::Index>(lay.u())];
  out.x_star.resize(el, el);
  out.z_star = DenseMatrix::Zero(el, el);
  out.y_star.resize(a.rows(), el);
  out.s_star.resize(el);
  out.t_star.resize(el);
  for (std::size_t j = 0; j < ell; ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    for (std::size_t i = 0; i < ell; ++i) {
      out.x_star(static_cast<Eigen::Index>(i), jj) = sol.x[static_cast<Eigen::Index>(lay.x(i, j))];
    }
    for (std::size_t k = 0; k < lay.d; ++k) {
      out.y_star(static_cast<Eigen::Index>(k), jj) = sol.y[static_cast<Eigen::Index>(lay.row_e(k, j))];
    }
    out.s_star[jj] = -sol.y[static_cast<Eigen::Index>(lay.row_s(j))];
  }
  out.v_star = sol.y[static_cast<Eigen::Index>(lay.row_t())];
  for (std::size_t i = 0; i < ell; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    out.t_star[ii] = -sol.y[static_cast<Eigen::Index>(lay.row_dg(i))];
    for (std::size_t j = 0; j < ell; ++j) {
      if (j != i) out.z_star(static_cast<Eigen::Index>(j), ii) = -sol.y[static_cast<Eigen::Index>(lay.row_z(i, j))];
    }
  }
  out.dual_objective = dual_objective(a, out);
  record_audit(out);
  return out;
}

double dual_objective(const DenseMatrix& a, const SubproblemSolution& sub) {
  const DenseMatrix al = linalg::select_columns(a, sub.l);
  return al.cwiseProduct(sub.y_star).sum() + static_cast<double>(sub.r) * sub.v_star - sub.t_star.sum();
}

double dual_violation(const DenseMatrix& a, const SubproblemSolution& sub) {
  const DenseMatrix al = linalg::select_columns(a, sub.l);
  const Eigen::Index ell = al.cols();
  DenseMatrix m = al.transpose() * sub.y_star - sub.z_star.transpose();
  const Vector zsum = sub.z_star.colwise().sum().transpose();
  for (Eigen::Index i = 0; i < ell; ++i) m(i, i) += sub.v_star - sub.t_star[i] + zsum[i];
  double worst = std::max(0.0, m.maxCoeff());
  for (Eigen::Index j = 0; j < ell; ++j) {
    worst = std::max(worst, sub.y_star.col(j).cwiseAbs().maxCoeff() - sub.s_star[j]);
  }
  worst = std::max(worst, sub.s_star.sum() - 1.0);
  worst = std::max(worst, -sub.s_star.minCoeff());
  worst = std::max(worst, -sub.t_star.minCoeff());
  worst = std::max(worst, -sub.z_star.minCoeff());
  return worst;
}

DualityAudit duality_audit() {
  std::lock_guard lock(audit_mutex);
  return audit_state;
}

void reset_duality_audit() {
  std::lock_guard lock(audit_mutex);
  audit_state = DualityAudit{};
}

RjSolution solve_rj(const DenseMatrix& a, const IndexSet& l, std::size_t j, const Vector& diag_x,
                    const lp::ToleranceConfig& tol) {
  linalg::require_valid(a, "solve_rj");
  const auto n = static_cast<std::size_t>(a.cols());
  require_indices(l, n, "solve_rj");
  if (j >= n) throw DomainError("solve_rj: index out of range");
  if (std::find(l.begin(), l.end(), j) != l.end()) throw DomainError("solve_rj: j must not lie in L");
  if (static_cast<std::size_t>(diag_x.size()) != l.size()) throw DomainError("solve_rj: diag_x has wrong length");
  if (!diag_x.allFinite() || diag_x.minCoeff() < -1e-9 || diag_x.maxCoeff() > 1.0 + 1e-9) {
    throw DomainError("solve_rj: diag_x must lie in [0, 1]");
  }

  const auto d = static_cast<std::size_t>(a.rows());
  const Vector aj = a.col(static_cast<Eigen::Index>(j));
  const Vector cap = diag_x.cwiseMax(0.0).cwiseMin(1.0);
  const std::vector<std::size_t> support = rj_support(cap);
  const std::size_t ell = l.size();

  RjSolution out;
  out.j = j;
  out.gamma = Vector::Zero(static_cast<Eigen::Index>(ell));
  if (support.empty()) {
    for (std::size_t k = 0; k < d; ++k) {
      out.basis.push_back(static_cast<int>(aj[static_cast<Eigen::Index>(k)] >= 0.0 ? ell + k : ell + d + k));
    }
  } else {
    // Variables: γ (p), f (d), g (d), w (p). Rows: E (d), box (p).
    const std::size_t p = support.size();
    const std::size_t f0 = p;
    const std::size_t g0 = p + d;
    const std::size_t w0 = p + 2 * d;
    std::vector<lp::Triplet> t;
    t.reserve(p * (d + 2) + 2 * d);
    for (std::size_t q = 0; q < p; ++q) {
      const auto col = static_cast<Eigen::Index>(l[support[q]]);
      for (std::size_t k = 0; k < d; ++k) {
        const double v = a(static_cast<Eigen::Index>(k), col);
        if (v != 0.0) t.emplace_back(static_cast<int>(k), static_cast<int>(q), v);
      }
      t.emplace_back(static_cast<int>(d + q), static_cast<int>(q), 1.0);
      t.emplace_back(static_cast<int>(d + q), static_cast<int>(w0 + q), 1.0);
    }
    for (std::size_t k = 0; k < d; ++k) {
      t.emplace_back(static_cast<int>(k), static_cast<int>(f0 + k), 1.0);
      t.emplace_back(static_cast<int>(k), static_cast<int>(g0 + k), -1.0);
    }
    lp::StandardLp prob;
    prob.a.resize(static_cast<Eigen::Index>(d + p), static_cast<Eigen::Index>(w0 + p));
    prob.a.setFromTriplets(t.begin(), t.end());
    prob.a.makeCompressed();
    prob.c = Vector::Zero(static_cast<Eigen::Index>(w0 + p));
    prob.c.segment(static_cast<Eigen::Index>(f0), static_cast<Eigen::Index>(2 * d)).setOnes();
    prob.b.resize(static_cast<Eigen::Index>(d + p));
    std::vector<int> start;
    start.reserve(d + p);
    for (std::size_t k = 0; k < d; ++k) {
      prob.b[static_cast<Eigen::Index>(k)] = aj[static_cast<Eigen::Index>(k)];
      start.push_back(static_cast<int>(aj[static_cast<Eigen::Index>(k)] >= 0.0 ? f0 + k : g0 + k));
    }
    for (std::size_t q = 0; q < p; ++q) {
      prob.b[static_cast<Eigen::Index>(d + q)] = cap[static_cast<Eigen::Index>(support[q])];
      start.push_back(static_cast<int>(w0 + q));
    }
    const lp::LpSolution sol = lp::solve(prob, tol, start);
    if (sol.status != lp::Status::Optimal) {
      throw SolverError(std::string("solve_rj: LP returned ") + lp::to_string(sol.status), sol.status,
                        sol.time_limited);
    }
    for (std::size_t q = 0; q < p; ++q) {
      const auto i = static_cast<Eigen::Index>(support[q]);
      out.gamma[i] = std::clamp(sol.x[static_cast<Eigen::Index>(q)], 0.0, cap[i]);
    }
    for (int v : sol.basis) {
      const auto vv = static_cast<std::size_t>(v);
      if (vv < f0) out.basis.push_back(static_cast<int>(support[vv]));
      else if (vv < w0) out.basis.push_back(static_cast<int>(ell + vv - f0));
      else if (vv < w0 + p) out.basis.push_back(static_cast<int>(ell + 2 * d + support[vv - w0]));
      else {
        out.basis.clear();
        break;
      }
    }
  }
  Vector residual = aj;
  for (std::size_t i = 0; i < l.size(); ++i) {
    const double gi = out.gamma[static_cast<Eigen::Index>(i)];
    if (gi != 0.0) residual -= gi * a.col(static_cast<Eigen::Index>(l[i]));
  }
  out.opt_value = residual.cwiseAbs().sum();
  return out;
}

std::vector<RjSolution> solve_rj_all(const DenseMatrix& a, const SubproblemSolution& sub,
                                     const lp::ToleranceConfig& tol) {
  const IndexSet rest = complement(sub.l, static_cast<std::size_t>(a.cols()));
  const Vector diag = sub.x_star.diagonal();
  std::vector<RjSolution> out(rest.size());
  parallel_for(rest.size(), [&](std::size_t q) { out[q] = solve_rj(a, sub.l, rest[q], diag, tol); });
  return out;
}

double default_eps(double u_star) { return 1e-7 * std::max(1.0, u_star); }

CheckResult check_c1(const SubproblemSolution& sub, const std::vector<RjSolution>& rjs, double eps) {
  CheckResult out;
  for (const RjSolution& rj : rjs) {
    if (rj.opt_value > sub.u_star + eps) out.violators.push_back(rj.j);
  }
  std::sort(out.violators.begin(), out.violators.end());
  out.holds = out.violators.empty();
  return out;
}

CheckResult check_c2(const SubproblemSolution& sub, const DenseMatrix& a, double eps) {
  CheckResult out;
  const IndexSet rest = complement(sub.l, static_cast<std::size_t>(a.cols()));
  for (std::size_t j : rest) {
    const Vector b = sub.y_star.transpose() * a.col(static_cast<Eigen::Index>(j));
    if (sub.v_star + b.cwiseMax(0.0).sum() > eps) out.violators.push_back(j);
  }
  out.holds = out.violators.empty();
  return out;
}

DenseMatrix assemble_full(const SubproblemSolution& sub, const std::vector<RjSolution>& rjs, std::size_t n) {
  require_indices(sub.l, n, "assemble_full");
  DenseMatrix x = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::vector<char> filled(n, 0);
  const std::size_t ell = sub.l.size();
  for (std::size_t b = 0; b < ell; ++b) {
    filled[sub.l[b]] = 1;
    for (std::size_t q = 0; q < ell; ++q) {
      x(static_cast<Eigen::Index>(sub.l[q]), static_cast<Eigen::Index>(sub.l[b])) =
          sub.x_star(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(b));
    }
  }
  for (const RjSolution& rj : rjs) {
    if (rj.j >= n || filled[rj.j]) throw DomainError("assemble_full: R_j index outside N∖L or repeated");
    if (static_cast<std::size_t>(rj.gamma.size()) != ell) throw DomainError("assemble_full: gamma has wrong length");
    filled[rj.j] = 1;
    for (std::size_t q = 0; q < ell; ++q) {
      x(static_cast<Eigen::Index>(sub.l[q]), static_cast<Eigen::Index>(rj.j)) = rj.gamma[static_cast<Eigen::Index>(q)];
    }
  }
  if (std::find(filled.begin(), filled.end(), 0) != filled.end()) {
    throw DomainError("assemble_full: missing R_j solution for some column outside L");
  }
  return x;
}

}  // namespace eeht::model
