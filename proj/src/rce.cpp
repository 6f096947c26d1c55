#include "eeht/rce.hpp"

#include "eeht/baselines.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <random>

namespace eeht::rce {

void RceConfig::validate() const {
  if (r < 1) throw DomainError("RceConfig: r must be positive");
  if (lambda < 1) throw DomainError("RceConfig: lambda must be positive");
  if (!(eps >= 0.0)) throw DomainError("RceConfig: eps must be nonnegative");
}

IndexSet initial_index_set(const DenseMatrix& a, const RceConfig& cfg) {
  cfg.validate();
  linalg::require_valid(a, "initial_index_set");
  const auto n = static_cast<std::size_t>(a.cols());
  if (n < cfg.r) throw DomainError("initial_index_set: fewer columns than r");

  const IndexSet picks = baselines::spa(a, cfg.r);
  std::vector<char> chosen(n, 0);
  const std::size_t lambda = std::min(cfg.lambda, n);
  std::vector<std::size_t> order(n);
  Vector dist(static_cast<Eigen::Index>(n));
  for (std::size_t p : picks) {
    dist = (a.colwise() - a.col(static_cast<Eigen::Index>(p))).colwise().norm().transpose();
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[0], order[p]);
    std::sort(order.begin() + 1, order.end(), [&](std::size_t x, std::size_t y) {
      const double dx = dist[static_cast<Eigen::Index>(x)];
      const double dy = dist[static_cast<Eigen::Index>(y)];
      return dx < dy || (dx == dy && x < y);
    });
    for (std::size_t k = 0; k < lambda; ++k) chosen[order[k]] = 1;
  }

  IndexSet rest;
  for (std::size_t j = 0; j < n; ++j) {
    if (!chosen[j]) rest.push_back(j);
  }
  IndexSet extra;
  std::mt19937_64 rng(cfg.seed);
  std::sample(rest.begin(), rest.end(), std::back_inserter(extra), std::min(cfg.mu, rest.size()), rng);
  for (std::size_t j : extra) chosen[j] = 1;

  IndexSet out;
  for (std::size_t j = 0; j < n; ++j) {
    if (chosen[j]) out.push_back(j);
  }
  return out;
}

RceResult rce_solve(const DenseMatrix& a, const RceConfig& cfg, const std::optional<IndexSet>& initial) {
  using Clock = std::chrono::steady_clock;
  cfg.validate();
  linalg::require_valid(a, "rce_solve");
  const auto n = static_cast<std::size_t>(a.cols());
  if (n < cfg.r) throw DomainError("rce_solve: fewer columns than r");

  IndexSet l = initial ? *initial : initial_index_set(a, cfg);
  if (l.size() < cfg.r) throw DomainError("rce_solve: initial index set smaller than r");
  const std::size_t max_rounds = cfg.max_rounds ? cfg.max_rounds : n;

  RceResult res;
  model::SubproblemSolution prev_sub;
  std::vector<model::RjSolution> prev_rjs;
  bool have_prev = false;
  for (std::size_t round = 0; round < max_rounds; ++round) {
    const auto start = Clock::now();
    RceRound rec;
    rec.ell = l.size();

    model::SubproblemSolution sub;
    std::vector<model::RjSolution> rjs;
    model::CheckResult c1;
    model::CheckResult c2;
    try {
      model::WarmStart warm;
      if (have_prev && cfg.warm_start) warm = {&prev_sub, &prev_rjs};
      sub = model::solve_subproblem(a, l, cfg.r, cfg.tol, warm);
      rec.u_star = sub.u_star;
      rec.v_star = sub.v_star;
      rec.lp_iterations = sub.iterations;
      const double eps = cfg.eps > 0.0 ? cfg.eps : model::default_eps(sub.u_star);
      rjs = model::solve_rj_all(a, sub, cfg.tol);
      c1 = model::check_c1(sub, rjs, eps);
      rec.c1_violators = c1.violators.size();
      if (c1.holds) {
        c2 = model::check_c2(sub, a, eps);
        rec.c2_violators = c2.violators.size();
      }
    } catch (const NumericalError& e) {
      rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
      res.trace.rounds.push_back(rec);
      throw RceError(std::string("rce_solve: round ") + std::to_string(round) + ": " + e.what(), res.trace);
    }
    rec.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    res.trace.rounds.push_back(rec);

    if (c1.holds && c2.holds) {
      res.x = model::assemble_full(sub, rjs, n);
      res.objective = (a - a * res.x).cwiseAbs().colwise().sum().maxCoeff();
      res.final_subproblem = std::move(sub);
      res.rjs = std::move(rjs);
      res.trace.converged = true;
      return res;
    }

    // New columns are appended so the previous basis lines up with the head
    // of the next L.
    const IndexSet& add = c1.holds ? c2.violators : c1.violators;
    l.insert(l.end(), add.begin(), add.end());
    prev_sub = std::move(sub);
    prev_rjs = std::move(rjs);
    have_prev = true;
  }
  throw RceError("rce_solve: max_rounds exhausted before C1 and C2 held", res.trace);
}

}  // namespace eeht::rce
