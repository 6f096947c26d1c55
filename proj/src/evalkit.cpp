#include "eeht/evalkit.hpp"

#include "eeht/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace eeht::evalkit {

namespace {

double assignment_cost(const DenseMatrix& cost, const std::vector<std::size_t>& perm) {
  double total = 0.0;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    total += cost(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(perm[k]));
  }
  return total;
}

std::vector<std::size_t> exhaustive_assignment(const DenseMatrix& cost) {
  const auto r = static_cast<std::size_t>(cost.rows());
  std::vector<std::size_t> perm(r);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::size_t> best = perm;
  double best_cost = assignment_cost(cost, perm);
  while (std::next_permutation(perm.begin(), perm.end())) {
    const double c = assignment_cost(cost, perm);
    if (c < best_cost) {
      best_cost = c;
      best = perm;
    }
  }
  return best;
}

// Shortest augmenting path with row/column potentials, O(r³).
std::vector<std::size_t> hungarian(const DenseMatrix& cost) {
  const auto r = static_cast<std::size_t>(cost.rows());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(r + 1, 0.0), v(r + 1, 0.0);
  std::vector<std::size_t> match(r + 1, 0), way(r + 1, 0);
  for (std::size_t i = 1; i <= r; ++i) {
    match[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(r + 1, inf);
    std::vector<char> used(r + 1, 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = match[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= r; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= r; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> out(r);
  for (std::size_t j = 1; j <= r; ++j) out[match[j] - 1] = j - 1;
  return out;
}

// Unit mean-removed columns; DomainError on a constant column.
DenseMatrix unit_directions(const DenseMatrix& a) {
  if (a.rows() < 2) throw DomainError("neighborhood_density: need at least two rows");
  DenseMatrix u = a.rowwise() - a.colwise().mean();
  for (Eigen::Index j = 0; j < u.cols(); ++j) {
    const double nrm = u.col(j).norm();
    if (!(nrm > 0.0)) throw DomainError("neighborhood_density: constant column has no direction");
    u.col(j) /= nrm;
  }
  return u;
}

}  // namespace

std::vector<std::size_t> solve_assignment(const DenseMatrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() < 1) throw DomainError("solve_assignment: cost must be square");
  if (!cost.allFinite()) throw DomainError("solve_assignment: non-finite cost");
  return cost.rows() <= 8 ? exhaustive_assignment(cost) : hungarian(cost);
}

MatchReport match_mrsa(const DenseMatrix& est, const DenseMatrix& refs) {
  linalg::require_valid(est, "match_mrsa");
  linalg::require_valid(refs, "match_mrsa");
  if (est.rows() != refs.rows() || est.cols() != refs.cols()) {
    throw DomainError("match_mrsa: est and refs must have the same shape");
  }
  const Eigen::Index r = est.cols();
  DenseMatrix cost(r, r);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) cost(i, j) = linalg::mrsa(Vector(est.col(i)), Vector(refs.col(j)));
  }
  MatchReport out;
  out.permutation = solve_assignment(cost);
  out.per_endmember_mrsa.resize(static_cast<std::size_t>(r));
  double total = 0.0;
  for (Eigen::Index k = 0; k < r; ++k) {
    const double c = cost(k, static_cast<Eigen::Index>(out.permutation[static_cast<std::size_t>(k)]));
    out.per_endmember_mrsa[static_cast<std::size_t>(k)] = c;
    total += c;
  }
  out.average_mrsa = total / static_cast<double>(r);
  return out;
}

AbundanceResult abundance(const DenseMatrix& a, const IndexSet& indices, const AbundanceOptions& opt) {
  linalg::require_valid(a, "abundance");
  if (indices.empty()) throw DomainError("abundance: empty index set");
  if (!(opt.tol >= 0.0) || opt.max_iter < 1) throw DomainError("abundance: invalid options");
  const DenseMatrix b = linalg::select_columns(a, indices);
  const DenseMatrix gram = b.transpose() * b;
  const DenseMatrix rhs = b.transpose() * a;
  const double lip = Eigen::SelfAdjointEigenSolver<DenseMatrix>(gram, Eigen::EigenvaluesOnly).eigenvalues().maxCoeff();
  const Eigen::Index r = b.cols();
  const Eigen::Index n = a.cols();

  AbundanceResult out;
  out.h.resize(r, n);
  std::vector<std::size_t> iters(static_cast<std::size_t>(n), 0);
  std::vector<char> ok(static_cast<std::size_t>(n), 1);
  Vector objective(n);

  parallel_for(static_cast<std::size_t>(n), [&](std::size_t jj) {
    const auto j = static_cast<Eigen::Index>(jj);
    const Vector c = rhs.col(j);
    const double half_aa = 0.5 * a.col(j).squaredNorm();
    // ½‖a − Bh‖² in Gram form.
    auto f = [&](const Vector& h) { return std::max(0.0, 0.5 * h.dot(gram * h) - c.dot(h) + half_aa); };
    auto step = [&](const Vector& y) {
      return linalg::project_simplex(y - (gram * y - c) / lip);
    };
    Vector x = Vector::Constant(r, 1.0 / static_cast<double>(r));
    if (!(lip > 0.0)) {
      out.h.col(j) = x;
      objective[j] = f(x);
      return;
    }
    Vector y = x;
    double t = 1.0;
    double fx = f(x);
    const double floor_abs = 1e-28 * (1.0 + half_aa);
    const double gap_floor = 1e-14 * (1.0 + half_aa);
    std::size_t k = 0;
    bool done = fx <= floor_abs;
    while (!done && k < opt.max_iter) {
      ++k;
      Vector xn = step(y);
      double fn = f(xn);
      if (fn > fx) {
        // Restart from a plain projected-gradient step, which cannot increase f.
        t = 1.0;
        xn = step(x);
        fn = f(xn);
        y = xn;
      } else {
        const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        y = xn + ((t - 1.0) / tn) * (xn - x);
        t = tn;
      }
      const double change = fx - fn;
      x = std::move(xn);
      const double prev = fx;
      fx = std::min(fn, fx);
      if (fx <= floor_abs) {
        done = true;
      } else if (change <= opt.tol * std::max(prev, std::numeric_limits<double>::min())) {
        // A small step can also mean slow progress; confirm with the
        // Frank-Wolfe gap, an upper bound on f(x) − f*.
        const Vector g = gram * x - c;
        done = g.dot(x) - g.minCoeff() <= opt.tol * fx + gap_floor;
      }
    }
    ok[jj] = done ? 1 : 0;
    iters[jj] = k;
    out.h.col(j) = x;
    objective[j] = fx;
  });

  out.objective = 2.0 * objective.sum();
  out.iterations = *std::max_element(iters.begin(), iters.end());
  out.converged = std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
  return out;
}

DensityProfile neighborhood_density(const DenseMatrix& a, double phi) {
  linalg::require_valid(a, "neighborhood_density");
  if (!(phi >= 0.0 && phi <= 1.0)) throw DomainError("neighborhood_density: phi must lie in [0, 1]");
  const DenseMatrix u = unit_directions(a);
  const Eigen::Index n = u.cols();
  DensityProfile out;
  out.phi = phi;
  out.rho.resize(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    std::size_t count = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) {
        ++count;
        continue;
      }
      const double angle =
          2.0 * std::atan2((u.col(i) - u.col(j)).norm(), (u.col(i) + u.col(j)).norm()) / std::numbers::pi;
      if (angle <= phi) ++count;
    }
    out.rho[i] = static_cast<double>(count) / static_cast<double>(n);
  });
  return out;
}

IndexSet filter_isolated(const DensityProfile& profile, double omega) {
  IndexSet kept;
  for (Eigen::Index i = 0; i < profile.rho.size(); ++i) {
    if (profile.rho[i] > omega) kept.push_back(static_cast<std::size_t>(i));
  }
  return kept;
}

IndexSet filter_isolated(const DenseMatrix& a, double phi, double omega) {
  return filter_isolated(neighborhood_density(a, phi), omega);
}

std::vector<std::size_t> density_histogram(const Vector& rho, double bin_width) {
  if (!(bin_width > 0.0 && bin_width <= 1.0)) throw DomainError("density_histogram: bin width must lie in (0, 1]");
  const auto bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width - 1e-9));
  std::vector<std::size_t> counts(bins, 0);
  for (Eigen::Index i = 0; i < rho.size(); ++i) {
    const double x = rho[i];
    if (!(x >= 0.0 && x <= 1.0)) throw DomainError("density_histogram: rho outside [0, 1]");
    const auto k = std::min(static_cast<std::size_t>(std::floor(x / bin_width + 1e-9)), bins - 1);
    ++counts[k];
  }
  return counts;
}

std::string encode_pgm(const Vector& values, std::size_t width, std::size_t height) {
  if (width < 1 || height < 1 || width * height != static_cast<std::size_t>(values.size())) {
    throw DomainError("encode_pgm: width*height must equal the number of pixels");
  }
  if (!values.allFinite()) throw DomainError("encode_pgm: non-finite value");
  std::string out = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  const std::size_t header = out.size();
  out.resize(header + width * height);
  for (std::size_t j = 0; j < width * height; ++j) {
    const std::size_t row = j % height;
    const std::size_t col = j / height;
    const double v = std::clamp(values[static_cast<Eigen::Index>(j)], 0.0, 1.0);
    out[header + row * width + col] = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * v)));
  }
  return out;
}

}  // namespace eeht::evalkit
