#include "basis_factor.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace eeht::lp {

const char* to_string(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterLimit: return "iteration-limit";
  }
  return "unknown";
}

void StandardLp::validate() const {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DomainError("StandardLp: constraint matrix must be at least 1 x 1");
  }
  if (c.size() != a.cols() || b.size() != a.rows()) {
    throw DomainError("StandardLp: dimension mismatch between c, A and b");
  }
  if (!c.allFinite() || !b.allFinite()) {
    throw DomainError("StandardLp: non-finite cost or right-hand side");
  }
  const double* v = a.valuePtr();
  const auto nnz = a.isCompressed() ? a.nonZeros() : a.data().size();
  for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(nnz); ++k) {
    if (!std::isfinite(v[k])) {
      throw DomainError("StandardLp: non-finite constraint coefficient");
    }
  }
}

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

class Simplex {
 public:
  Simplex(const StandardLp& lp, const ToleranceConfig& tol)
      : lp_(lp),
        tol_(tol),
        m_(static_cast<int>(lp.a.rows())),
        n_(static_cast<int>(lp.a.cols())),
        outer_(lp.a.outerIndexPtr()),
        inner_(lp.a.innerIndexPtr()),
        val_(lp.a.valuePtr()) {
    const auto mn = static_cast<std::size_t>(m_ + n_);
    max_pivots_ = tol.max_pivots ? tol.max_pivots : 50 * mn;
    bland_after_ = tol.bland_after ? tol.bland_after : 10 * mn;
    art_sign_.assign(static_cast<std::size_t>(m_), 1.0);
    for (int i = 0; i < m_; ++i) {
      if (lp.b[i] < 0.0) art_sign_[static_cast<std::size_t>(i)] = -1.0;
    }
    cost_ = Vector::Zero(n_ + m_);
    upper_.assign(static_cast<std::size_t>(n_ + m_), kInf);
    pos_.assign(static_cast<std::size_t>(n_ + m_), -1);
    src_.a = &lp.a;
    src_.artificial_sign = art_sign_;
    const int segments = n_ + m_ > 20000 ? 16 : 1;
    segment_ = (n_ + m_ + segments - 1) / segments;
  }

  LpSolution run(std::span<const int> warm) {
    start_ = Clock::now();

    if (!try_warm_start(warm)) cold_start();
    bool need_phase_one = false;
    for (int p = 0; p < m_; ++p) {
      if (is_artificial(basis_[p]) && xb_[p] > 0.0) need_phase_one = true;
    }

    if (need_phase_one) {
      for (int i = 0; i < m_; ++i) cost_[n_ + i] = 1.0;
      const Outcome o = iterate();
      if (o == Outcome::IterLimit) return finish(Status::IterLimit);
      double infeasibility = 0.0;
      for (int p = 0; p < m_; ++p) {
        if (is_artificial(basis_[p])) infeasibility += std::max(xb_[p], 0.0);
      }
      const double bscale = 1.0 + lp_.b.cwiseAbs().maxCoeff();
      if (infeasibility > 10.0 * tol_.feas_tol * bscale) {
        Vector y = basic_costs();
        factor_.btran(y);
        LpSolution res = finish(Status::Infeasible);
        res.ray = y;
        return res;
      }
    }

    // Phase 2: artificials are pinned at zero and priced out of the basis.
    for (int i = 0; i < m_; ++i) {
      cost_[n_ + i] = 0.0;
      upper_[static_cast<std::size_t>(n_ + i)] = 0.0;
    }
    cost_.head(n_) = lp_.c;
    drive_out_artificials();

    for (int attempt = 0; attempt < 4; ++attempt) {
      const Outcome o = iterate();
      if (o == Outcome::IterLimit) return finish(Status::IterLimit);
      if (o == Outcome::Unbounded) {
        LpSolution res = finish(Status::Unbounded);
        res.ray = Vector::Zero(n_);
        res.ray[unbounded_q_] = 1.0;
        for (int p = 0; p < m_; ++p) {
          if (!is_artificial(basis_[p])) res.ray[basis_[p]] = -unbounded_alpha_[p];
        }
        return res;
      }
      // Re-check optimality on a fresh factorization; drift in the eta file
      // can hide a remaining improving column.
      if (!refactor()) return finish(Status::IterLimit);
      compute_primal();
      if (price(dual_values()) < 0) break;
    }
    return finish(Status::Optimal);
  }

 private:
  enum class Outcome { Optimal, Unbounded, IterLimit };

  bool is_artificial(int j) const { return j >= n_; }

  // Artificials in a warm basis take whichever sign makes them nonnegative;
  // any positive one sends the solve through phase 1 from this basis.
  bool try_warm_start(std::span<const int> warm) {
    if (warm.size() != static_cast<std::size_t>(m_)) return false;
    std::vector<char> seen(static_cast<std::size_t>(n_ + m_), 0);
    for (int j : warm) {
      if (j < 0 || j >= n_ + m_ || seen[static_cast<std::size_t>(j)]++) return false;
    }
    const std::vector<double> saved_sign = art_sign_;
    auto reject = [&] {
      art_sign_ = saved_sign;
      good_basis_.clear();
      return false;
    };
    set_basis(std::vector<int>(warm.begin(), warm.end()));
    if (!refactor()) return reject();
    compute_primal();
    bool flipped = false;
    for (int p = 0; p < m_; ++p) {
      if (is_artificial(basis_[p]) && xb_[p] < 0.0) {
        art_sign_[static_cast<std::size_t>(basis_[p] - n_)] *= -1.0;
        flipped = true;
      }
    }
    if (flipped) {
      if (!refactor()) return reject();
      compute_primal();
    }
    if (xb_.size() > 0 && xb_.minCoeff() < -tol_.feas_tol) return reject();
    return true;
  }

  // Unit-like singleton columns stand in for artificials where their value
  // is nonnegative; every other row gets a signed artificial.
  void cold_start() {
    std::vector<int> basis(static_cast<std::size_t>(m_), -1);
    for (int j = 0; j < n_; ++j) {
      if (outer_[j + 1] - outer_[j] != 1) continue;
      const int row = inner_[outer_[j]];
      const double coef = val_[outer_[j]];
      auto& slot = basis[static_cast<std::size_t>(row)];
      if (slot >= 0 || coef == 0.0) continue;
      if (lp_.b[row] / coef >= 0.0) slot = j;
    }
    for (int i = 0; i < m_; ++i) {
      if (basis[static_cast<std::size_t>(i)] < 0) basis[static_cast<std::size_t>(i)] = n_ + i;
    }
    set_basis(std::move(basis));
    refactor();
    compute_primal();
  }

  void set_basis(std::vector<int> basis) {
    std::fill(pos_.begin(), pos_.end(), -1);
    basis_ = std::move(basis);
    for (int p = 0; p < m_; ++p) pos_[static_cast<std::size_t>(basis_[p])] = p;
  }

  bool refactor() {
    if (factor_.factorize(src_, basis_)) {
      good_basis_ = basis_;
      return true;
    }
    if (good_basis_.empty() || good_basis_ == basis_) return false;
    set_basis(good_basis_);
    bland_ = true;
    return factor_.factorize(src_, basis_);
  }

  void compute_primal() {
    xb_ = lp_.b;
    factor_.ftran(xb_);
  }

  Vector basic_costs() const {
    Vector cb(m_);
    for (int p = 0; p < m_; ++p) cb[p] = cost_[basis_[p]];
    return cb;
  }

  Vector dual_values() const {
    Vector y = basic_costs();
    factor_.btran(y);
    return y;
  }

  double reduced_cost(int j, const Vector& y) const {
    if (is_artificial(j)) return cost_[j] - art_sign_[static_cast<std::size_t>(j - n_)] * y[j - n_];
    double d = cost_[j];
    for (int k = outer_[j]; k < outer_[j + 1]; ++k) d -= val_[k] * y[inner_[k]];
    return d;
  }

  bool eligible(int j) const {
    return pos_[static_cast<std::size_t>(j)] < 0 && upper_[static_cast<std::size_t>(j)] > 0.0;
  }

  // Dantzig pricing (partial over column segments on large problems);
  // Bland's smallest-index rule once degeneracy has stalled progress.
  int price(const Vector& y) {
    const int total = n_ + m_;
    if (bland_) {
      for (int j = 0; j < total; ++j) {
        if (eligible(j) && reduced_cost(j, y) < -tol_.opt_tol) return j;
      }
      return -1;
    }
    const int segments = (total + segment_ - 1) / segment_;
    for (int s = 0; s < segments; ++s) {
      const int seg = (next_segment_ + s) % segments;
      const int lo = seg * segment_;
      const int hi = std::min(total, lo + segment_);
      int best = -1;
      double best_d = -tol_.opt_tol;
      for (int j = lo; j < hi; ++j) {
        if (!eligible(j)) continue;
        const double d = reduced_cost(j, y);
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      if (best >= 0) {
        next_segment_ = (seg + 1) % segments;
        return best;
      }
    }
    return -1;
  }

  void load_column(int j, Vector& out) const {
    out.setZero(m_);
    if (is_artificial(j)) {
      out[j - n_] = art_sign_[static_cast<std::size_t>(j - n_)];
      return;
    }
    for (int k = outer_[j]; k < outer_[j + 1]; ++k) out[inner_[k]] = val_[k];
  }

  // Two-pass Harris ratio test; returns the leaving position or -1.
  int ratio_test(const Vector& alpha, double& theta) const {
    const double scale = std::max(1.0, alpha.cwiseAbs().maxCoeff());
    const double ptol = tol_.pivot_tol * scale;
    auto bound_gap = [&](int p, double a) -> double {
      const double ub = upper_[static_cast<std::size_t>(basis_[p])];
      if (a > 0.0) return xb_[p];
      return std::isfinite(ub) ? ub - xb_[p] : kInf;
    };

    if (bland_) {
      int leave = -1;
      double best = kInf;
      for (int p = 0; p < m_; ++p) {
        const double a = alpha[p];
        if (std::abs(a) <= ptol) continue;
        const double gap = bound_gap(p, a);
        if (!std::isfinite(gap)) continue;
        const double t = std::max(gap, 0.0) / std::abs(a);
        if (t < best || (t == best && leave >= 0 && basis_[p] < basis_[leave])) {
          best = t;
          leave = p;
        }
      }
      theta = best;
      return leave;
    }

    double theta_max = kInf;
    for (int p = 0; p < m_; ++p) {
      const double a = alpha[p];
      if (std::abs(a) <= ptol) continue;
      const double gap = bound_gap(p, a);
      if (!std::isfinite(gap)) continue;
      theta_max = std::min(theta_max, (gap + tol_.feas_tol) / std::abs(a));
    }
    if (!std::isfinite(theta_max)) return -1;
    int leave = -1;
    double best_abs = 0.0;
    for (int p = 0; p < m_; ++p) {
      const double a = alpha[p];
      if (std::abs(a) <= ptol) continue;
      const double gap = bound_gap(p, a);
      if (!std::isfinite(gap)) continue;
      const double t = gap / std::abs(a);
      if (t <= theta_max && std::abs(a) > best_abs) {
        best_abs = std::abs(a);
        leave = p;
        theta = std::max(t, 0.0);
      }
    }
    return leave;
  }

  bool out_of_budget() {
    if (iterations_ >= max_pivots_) return true;
    if (std::isfinite(tol_.time_limit_seconds) && (iterations_ & 15) == 0) {
      const std::chrono::duration<double> el = Clock::now() - start_;
      if (el.count() > tol_.time_limit_seconds) {
        time_limited_ = true;
        return true;
      }
    }
    return false;
  }

  void pivot(int p, int q, const Vector& alpha, double theta) {
    for (int i = 0; i < m_; ++i) xb_[i] -= theta * alpha[i];
    pos_[static_cast<std::size_t>(basis_[p])] = -1;
    basis_[p] = q;
    pos_[static_cast<std::size_t>(q)] = p;
    xb_[p] = theta;
    factor_.update(p, alpha);
    ++iterations_;
    if (factor_.eta_count() >= tol_.refactor_every) {
      refactor();
      compute_primal();
    }
  }

  Outcome iterate() {
    Vector alpha;
    while (true) {
      if (out_of_budget()) return Outcome::IterLimit;
      const Vector y = dual_values();
      const int q = price(y);
      if (q < 0) return Outcome::Optimal;
      load_column(q, alpha);
      factor_.ftran(alpha);
      double theta = 0.0;
      const int p = ratio_test(alpha, theta);
      if (p < 0) {
        unbounded_q_ = q;
        unbounded_alpha_ = alpha;
        return Outcome::Unbounded;
      }
      if (theta <= tol_.feas_tol) {
        if (++degenerate_run_ > bland_after_) bland_ = true;
      } else {
        degenerate_run_ = 0;
        bland_ = false;
      }
      pivot(p, q, alpha, theta);
    }
  }

  // Swaps zero-valued basic artificials for structural columns where the
  // basis row admits a nonzero pivot; rows with none are redundant.
  void drive_out_artificials() {
    Vector row;
    Vector alpha;
    for (int p = 0; p < m_; ++p) {
      if (!is_artificial(basis_[p])) continue;
      row.setZero(m_);
      row[p] = 1.0;
      factor_.btran(row);
      int best = -1;
      double best_abs = 1e-7;
      for (int j = 0; j < n_; ++j) {
        if (pos_[static_cast<std::size_t>(j)] >= 0) continue;
        double a = 0.0;
        for (int k = outer_[j]; k < outer_[j + 1]; ++k) a += val_[k] * row[inner_[k]];
        if (std::abs(a) > best_abs) {
          best_abs = std::abs(a);
          best = j;
        }
      }
      if (best < 0) continue;
      load_column(best, alpha);
      factor_.ftran(alpha);
      const double theta = xb_[p] / alpha[p];
      for (int i = 0; i < m_; ++i) xb_[i] -= theta * alpha[i];
      pos_[static_cast<std::size_t>(basis_[p])] = -1;
      basis_[p] = best;
      pos_[static_cast<std::size_t>(best)] = p;
      xb_[p] = theta;
      factor_.update(p, alpha);
      if (factor_.eta_count() >= tol_.refactor_every) {
        refactor();
        compute_primal();
      }
    }
  }

  LpSolution finish(Status status) {
    LpSolution out;
    out.status = status;
    out.iterations = iterations_;
    out.time_limited = time_limited_;
    out.basis = basis_;
    out.x = Vector::Zero(n_);
    for (int p = 0; p < m_; ++p) {
      if (!is_artificial(basis_[p])) out.x[basis_[p]] = xb_[p];
    }
    out.y = dual_values();
    out.objective = lp_.c.dot(out.x);
    return out;
  }

  const StandardLp& lp_;
  ToleranceConfig tol_;
  int m_;
  int n_;
  const int* outer_;
  const int* inner_;
  const double* val_;
  std::vector<double> art_sign_;
  detail::ColumnSource src_;
  Vector cost_;
  std::vector<double> upper_;
  std::vector<int> basis_;
  std::vector<int> good_basis_;
  std::vector<int> pos_;
  Vector xb_;
  detail::BasisFactor factor_;
  std::size_t iterations_ = 0;
  std::size_t max_pivots_ = 0;
  std::size_t bland_after_ = 0;
  std::size_t degenerate_run_ = 0;
  bool bland_ = false;
  bool time_limited_ = false;
  int segment_ = 1;
  int next_segment_ = 0;
  int unbounded_q_ = -1;
  Vector unbounded_alpha_;
  Clock::time_point start_;
};

}  // namespace

LpSolution solve(const StandardLp& lp, const ToleranceConfig& tol, std::span<const int> warm_basis) {
  lp.validate();
  const StandardLp* src = &lp;
  StandardLp copy;
  if (!lp.a.isCompressed()) {
    copy = lp;
    copy.a.makeCompressed();
    src = &copy;
  }
  Simplex simplex(*src, tol);
  return simplex.run(warm_basis);
}

}  // namespace eeht::lp
