#include "eeht/postprocess.hpp"

#include "eeht/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

namespace eeht::postprocess {

const char* to_string(Method m) {
  switch (m) {
    case Method::DiagTopR: return "diag-top-r";
    case Method::MaxPoint: return "max-point";
    case Method::CentroidMrsa: return "centroid-mrsa";
  }
  return "unknown";
}

namespace {

// Evaluated with the smaller index first so that d(i,j) == d(j,i) bitwise.
double l1_distance(const DenseMatrix& a, std::size_t i, std::size_t j) {
  if (j < i) std::swap(i, j);
  return (a.col(static_cast<Eigen::Index>(i)) - a.col(static_cast<Eigen::Index>(j))).cwiseAbs().sum();
}

// Position of u in the Ω_i order: the anchor first, then (distance, index).
struct Key {
  bool anchor;
  double dist;
  std::size_t index;

  bool operator<(const Key& o) const {
    if (anchor != o.anchor) return anchor;
    if (dist != o.dist) return dist < o.dist;
    return index < o.index;
  }
};

struct Candidate {
  bool found = false;
  double diameter = 0.0;
  Key last{};
  double score = 0.0;
};

// Only members with positive points move the score, so the shortest prefix
// of Ω_i that clears the threshold ends at a supported column.
Candidate scan_anchor(const DenseMatrix& a, const Vector& p, const std::vector<std::size_t>& support,
                      std::size_t i, double threshold) {
  std::vector<Key> keys;
  keys.reserve(support.size());
  for (std::size_t u : support) keys.push_back({u == i, u == i ? 0.0 : l1_distance(a, i, u), u});
  std::sort(keys.begin(), keys.end());
  Candidate c;
  double score = 0.0;
  for (const Key& k : keys) {
    score += p[static_cast<Eigen::Index>(k.index)];
    if (score > threshold) {
      c.found = true;
      c.diameter = k.dist;
      c.last = k;
      c.score = score;
      return c;
    }
  }
  return c;
}

double centroid_distance(const Vector& c, const Vector& x) {
  const double cc = (c.array() - c.mean()).matrix().norm();
  const double xx = (x.array() - x.mean()).matrix().norm();
  if (cc < 1e-12 || xx < 1e-12) return (c - x).norm();
  return linalg::mrsa(c, x);
}

}  // namespace

Cluster min_diam_cluster(const DenseMatrix& a, const Vector& p, std::size_t r) {
  linalg::require_valid(a, "min_diam_cluster");
  const auto n = static_cast<std::size_t>(a.cols());
  if (static_cast<std::size_t>(p.size()) != n) throw DomainError("min_diam_cluster: point list has wrong length");
  if (!p.allFinite() || p.minCoeff() < 0.0) throw DomainError("min_diam_cluster: point list must be nonnegative");
  if (r < 1) throw DomainError("min_diam_cluster: r must be positive");
  const double threshold = static_cast<double>(r) / static_cast<double>(r + 1);

  std::vector<std::size_t> support;
  for (std::size_t u = 0; u < n; ++u) {
    if (p[static_cast<Eigen::Index>(u)] > 0.0) support.push_back(u);
  }
  std::vector<Candidate> per_anchor(n);
  parallel_for(n, [&](std::size_t i) { per_anchor[i] = scan_anchor(a, p, support, i, threshold); });

  std::size_t best = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!per_anchor[i].found) continue;
    if (best == n || per_anchor[i].diameter < per_anchor[best].diameter) best = i;
  }
  if (best == n) throw DomainError("min_diam_cluster: no cluster has score above r/(r+1)");

  Cluster out;
  out.anchor = best;
  out.diameter = per_anchor[best].diameter;
  out.score = per_anchor[best].score;
  const Key last = per_anchor[best].last;
  std::vector<Key> members;
  for (std::size_t u = 0; u < n; ++u) {
    const Key k{u == best, u == best ? 0.0 : l1_distance(a, best, u), u};
    if (!(last < k)) members.push_back(k);
  }
  std::sort(members.begin(), members.end());
  for (const Key& k : members) out.members.push_back(k.index);
  return out;
}

ClusterSelection select(const DenseMatrix& a, const Vector& diag_x, std::size_t r, Method method) {
  linalg::require_valid(a, "select");
  const auto n = static_cast<std::size_t>(a.cols());
  if (static_cast<std::size_t>(diag_x.size()) != n) throw DomainError("select: diag_x has wrong length");
  if (!diag_x.allFinite() || diag_x.minCoeff() < -1e-9 || diag_x.maxCoeff() > 1.0 + 1e-9) {
    throw DomainError("select: diag_x must lie in [0, 1]");
  }
  if (r < 1 || r > n) throw DomainError("select: fewer than r selectable indices");

  ClusterSelection out;
  out.method = method;
  const Vector p1 = diag_x.cwiseMax(0.0).cwiseMin(1.0);

  if (method == Method::DiagTopR) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      return p1[static_cast<Eigen::Index>(x)] > p1[static_cast<Eigen::Index>(y)];
    });
    for (std::size_t k = 0; k < r; ++k) {
      out.chosen.push_back(order[k]);
      out.clusters.push_back({order[k]});
    }
    return out;
  }

  Vector p = p1;
  std::vector<char> taken(n, 0);
  while (out.chosen.size() < r) {
    const Cluster s = min_diam_cluster(a, p, r);
    std::size_t pick = n;
    if (method == Method::MaxPoint) {
      for (std::size_t u : s.members) {
        if (pick == n || p[static_cast<Eigen::Index>(u)] > p[static_cast<Eigen::Index>(pick)]) pick = u;
      }
    } else {
      Vector centroid = Vector::Zero(a.rows());
      for (std::size_t u : s.members) centroid += a.col(static_cast<Eigen::Index>(u));
      centroid /= static_cast<double>(s.members.size());
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t u : s.members) {
        if (taken[u]) continue;
        const double dist = centroid_distance(centroid, a.col(static_cast<Eigen::Index>(u)));
        if (dist < best || (dist == best && u < pick)) {
          best = dist;
          pick = u;
        }
      }
    }
    if (pick == n || taken[pick]) throw DomainError("select: cluster offers no unselected index");
    taken[pick] = 1;
    out.chosen.push_back(pick);
    out.clusters.push_back(s.members);
    for (std::size_t u : s.members) p[static_cast<Eigen::Index>(u)] = 0.0;
  }
  return out;
}

ExtractionResult eeht_extract(const DenseMatrix& a, const rce::RceConfig& cfg, Method method, bool reduce) {
  using Clock = std::chrono::steady_clock;
  linalg::require_valid(a, "eeht_extract");
  const auto d = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  if (cfg.r < 1 || cfg.r > std::min(d, n)) throw DomainError("eeht_extract: r must lie in [1, min(d, n)]");

  ExtractionResult out;
  auto t0 = Clock::now();
  DenseMatrix reduced;
  if (reduce) reduced = linalg::truncated_svd(a, cfg.r).reduced();
  const DenseMatrix& work = reduce ? reduced : a;
  auto t1 = Clock::now();
  const rce::RceResult res = rce::rce_solve(work, cfg);
  auto t2 = Clock::now();
  out.diag = res.x.diagonal();
  out.selection = select(work, out.diag, cfg.r, method);
  auto t3 = Clock::now();

  out.indices = out.selection.chosen;
  out.objective = res.objective;
  out.trace = res.trace;
  out.seconds_reduce = std::chrono::duration<double>(t1 - t0).count();
  out.seconds_rce = std::chrono::duration<double>(t2 - t1).count();
  out.seconds_select = std::chrono::duration<double>(t3 - t2).count();
  return out;
}

}  // namespace eeht::postprocess
