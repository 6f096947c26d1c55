// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include "eeht/baselines.hpp"
#include "eeht/cli.hpp"
#include "eeht/datagen.hpp"
#include "eeht/evalkit.hpp"
#include "eeht/model.hpp"
#include "eeht/postprocess.hpp"
#include "eeht/rce.hpp"
#include "oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace eeht;
using postprocess::Method;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

IndexSet sorted(IndexSet s) {
  std::sort(s.begin(), s.end());
  return s;
}

double avg_mrsa(const DenseMatrix& a, const IndexSet& idx, const DenseMatrix& refs) {
  return evalkit::match_mrsa(linalg::select_columns(a, idx), refs).average_mrsa;
}

rce::RceConfig rce_config(std::size_t r) {
  rce::RceConfig c;
  c.r = r;
  return c;
}

// 1. RCE against an independently formulated direct LP on the reduced matrix.
Outcome oracle_equivalence() {
  Outcome o;
  std::size_t count = 0;
  double worst = 0.0;
  std::uint64_t seed = 1;
  for (std::size_t n : {30u, 40u, 60u}) {
    for (std::size_t r : {3u, 4u, 5u}) {
      for (double nu : {0.0, 0.2, 0.5}) {
        const auto inst = datagen::gen_synthetic(20, n, r, nu, seed++);
        const DenseMatrix a = linalg::truncated_svd(inst.a, 10).reduced();
        auto cfg = rce_config(r);
        cfg.lambda = 2;
        cfg.mu = 5;
        const auto res = rce::rce_solve(a, cfg);
        const double direct = oracle::direct_hottopixx(a, r);
        const double gap = std::abs(res.objective - direct) / std::max(1.0, direct);
        worst = std::max(worst, gap);
        const auto cert = model::certify_global(a, res.final_subproblem, res.rjs,
                                                model::default_eps(res.final_subproblem.u_star));
        if (gap > 1e-6 || !cert.passed) {
          o.pass = false;
          std::ostringstream s;
          s << " [n=" << n << " r=" << r << " nu=" << nu << " gap=" << gap << " cert=" << cert.violated_block << "]";
          o.detail += s.str();
        }
        ++count;
      }
    }
  }
  std::ostringstream s;
  s << count << " instances, max relative gap " << worst << o.detail;
  o.detail = s.str();
  o.pass = o.pass && count >= 20;
  return o;
}

// 2. Noiseless recovery by all four methods.
Outcome noiseless_recovery() {
  Outcome o;
  struct Case {
    std::size_t d, n, r;
  };
  std::size_t count = 0;
  double worst_obj = 0.0;
  std::uint64_t seed = 100;
  for (const Case c : {Case{10, 60, 3}, Case{20, 100, 5}, Case{25, 200, 8}, Case{30, 300, 10}}) {
    for (int rep = 0; rep < 2; ++rep) {
      const auto inst = datagen::gen_synthetic(c.d, c.n, c.r, 0.0, seed++);
      const IndexSet want = sorted(inst.pure_indices);
      for (Method m : {Method::DiagTopR, Method::MaxPoint, Method::CentroidMrsa}) {
        const auto res = postprocess::eeht_extract(inst.a, rce_config(c.r), m);
        worst_obj = std::max(worst_obj, res.objective);
        if (sorted(res.indices) != want || res.objective > 1e-6) {
          o.pass = false;
          o.detail += std::string(" [") + postprocess::to_string(m) + " n=" + std::to_string(c.n) + "]";
        }
      }
      const DenseMatrix red = linalg::truncated_svd(inst.a, c.r).reduced();
      if (sorted(baselines::spa(red, c.r)) != want) {
        o.pass = false;
        o.detail += " [spa n=" + std::to_string(c.n) + "]";
      }
      ++count;
    }
  }
  std::ostringstream s;
  s << count << " instances x 4 methods, max optimum " << worst_obj << o.detail;
  o.detail = s.str();
  return o;
}

// 3. Every pure column duplicated.
Outcome duplicated_pure_columns() {
  Outcome o;
  constexpr double kZero = 1e-6;  // acos rounding near identical directions
  std::ostringstream s;
  std::size_t a_positive = 0;
  for (std::uint64_t seed : {201u, 202u, 203u}) {
    const std::size_t r = 4;
    const auto inst = datagen::gen_synthetic(10, 60, r, 0.0, seed);
    DenseMatrix dup(inst.a.rows(), inst.a.cols() + static_cast<Eigen::Index>(r));
    dup.leftCols(inst.a.cols()) = inst.a;
    for (std::size_t k = 0; k < r; ++k) {
      dup.col(inst.a.cols() + static_cast<Eigen::Index>(k)) = inst.a.col(static_cast<Eigen::Index>(inst.pure_indices[k]));
    }
    const auto ra = postprocess::eeht_extract(dup, rce_config(r), Method::DiagTopR);
    const auto rc = postprocess::eeht_extract(dup, rce_config(r), Method::CentroidMrsa);
    const double ma = avg_mrsa(dup, ra.indices, inst.w);
    const double mc = avg_mrsa(dup, rc.indices, inst.w);
    const auto rd = postprocess::eeht_extract(inst.a, rce_config(r), Method::DiagTopR);
    const double md = avg_mrsa(inst.a, rd.indices, inst.w);
    if (ma > kZero) ++a_positive;
    const bool ok = mc <= kZero && mc <= ma + 1e-12 && md <= kZero;
    o.pass = o.pass && ok;
    s << " seed " << seed << ": eeht-c " << mc << ", eeht-a " << ma << ", eeht-a dedup " << md << ";";
  }
  s << " eeht-a positive on " << a_positive << "/3";
  o.detail = s.str();
  return o;
}

// 5. Timing at d = 50, r = 10, n = 1000.
Outcome timing_trend(double cap) {
  Outcome o;
  cli::BenchConfig cfg;
  cfg.sizes = {1000};
  cfg.d = 50;
  cfg.r = 10;
  cfg.trials = 3;
  cfg.direct_cap = cap;
  cfg.rce_dir = false;
  const auto rows = cli::run_bench(cfg, &std::cerr);
  const auto& row = rows.front();
  o.pass = row.rce_sr_seconds < row.direct_seconds;
  std::ostringstream s;
  s << "RCE-SR mean " << row.rce_sr_seconds << " s, direct mean " << row.direct_seconds << " s";
  if (row.direct_capped > 0) s << " (" << row.direct_capped << "/3 capped at " << cap << " s, lower bound)";
  o.detail = s.str();
  return o;
}

// Toy "real" scene: a side×side image split into Voronoi regions, one per
// material. Pixels are dominated by their region's material (Dirichlet with
// a heavy dominant weight). Each pixel sees its own multiplicative
// perturbation of every signature (spectral variability of strength
// `variability`) and a random illumination gain.
DenseMatrix toy_scene(const DenseMatrix& w, std::size_t side, double variability, std::uint64_t seed) {
  const auto r = static_cast<std::size_t>(w.cols());
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::gamma_distribution<double> dominant(3.0, 1.0), minor(0.2, 1.0);
  std::vector<std::pair<double, double>> centers(r);
  for (auto& c : centers) c = {unif(rng), unif(rng)};
  DenseMatrix a(w.rows(), static_cast<Eigen::Index>(side * side));
  for (std::size_t px = 0; px < side * side; ++px) {
    const double x = (static_cast<double>(px / side) + 0.5) / static_cast<double>(side);
    const double y = (static_cast<double>(px % side) + 0.5) / static_cast<double>(side);
    std::size_t region = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < r; ++k) {
      const double dist = std::hypot(x - centers[k].first, y - centers[k].second);
      if (dist < best) {
        best = dist;
        region = k;
      }
    }
    Vector h(static_cast<Eigen::Index>(r));
    for (std::size_t k = 0; k < r; ++k) h[static_cast<Eigen::Index>(k)] = k == region ? dominant(rng) : minor(rng);
    h /= h.sum();
    Vector col = Vector::Zero(w.rows());
    for (Eigen::Index k = 0; k < w.cols(); ++k) {
      for (Eigen::Index i = 0; i < w.rows(); ++i) {
        col[i] += h[k] * w(i, k) * std::max(0.0, 1.0 + variability * normal(rng));
      }
    }
    a.col(static_cast<Eigen::Index>(px)) = (0.5 + 1.5 * unif(rng)) * col;
  }
  return a;
}

// 6. Semi-real noise sweep: eeht-c against spa.
Outcome noise_sweep() {
  Outcome o;
  const std::size_t r = 5;
  const DenseMatrix w_ref = datagen::gen_synthetic(30, 30, r, 0.0, 4242).w;
  const DenseMatrix a_real = toy_scene(w_ref, 20, 0.15, 4243);

  double sum_c = 0.0, sum_spa = 0.0;
  std::size_t c_wins = 0;
  const auto grid = datagen::noise_grid(10);
  std::ostringstream levels;
  for (double nu : grid) {
    const auto s = datagen::build_semireal(a_real, w_ref, nu);
    const IndexSet sp = baselines::spa(linalg::truncated_svd(s.a, r).reduced(), r);
    double mc = 0.0;
    try {
      const auto rc = postprocess::eeht_extract(s.a, rce_config(r), Method::CentroidMrsa);
      mc = avg_mrsa(s.a, rc.indices, s.w);
    } catch (const DomainError& e) {
      levels << " " << nu << ":error(" << e.what() << ")";
      o.pass = false;
      continue;
    }
    const double ms = avg_mrsa(s.a, sp, s.w);
    sum_c += mc;
    sum_spa += ms;
    if (mc <= ms) ++c_wins;
    levels << " " << nu << ":" << mc << "/" << ms;
  }
  const double k = static_cast<double>(grid.size());
  o.pass = o.pass && sum_c / k <= sum_spa / k;
  std::ostringstream s;
  s << "mean MRSA eeht-c " << sum_c / k << ", spa " << sum_spa / k << "; eeht-c <= spa on " << c_wins
    << "/10 levels; per level (eeht-c/spa):" << levels.str();
  o.detail = s.str();
  return o;
}

// 7. Property suites against test-side oracles.
Outcome property_suites() {
  Outcome o;
  std::ostringstream s;
  auto fail = [&](const std::string& what) {
    o.pass = false;
    s << " [" << what << "]";
  };

  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const DenseMatrix a = oracle::random_matrix(1 + seed % 9, 1 + (seed / 9) % 11, seed, -1, 1);
    if (std::abs(linalg::l1_norm(a) - oracle::column_sum_norm(a)) > 1e-12 * std::max(1.0, oracle::column_sum_norm(a))) {
      fail("l1 identity seed " + std::to_string(seed));
      break;
    }
  }

  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const DenseMatrix m = oracle::random_matrix(6, 2, 10000 + seed, -1, 1);
    const Vector x = m.col(0), y = m.col(1);
    const double v = linalg::mrsa(x, y);
    const double w = linalg::mrsa(Vector(2.5 * y.array() + 0.7), x);
    if (!(v >= 0.0 && v <= 1.0) || std::abs(v - w) > 1e-12 || std::abs(linalg::mrsa(x, x)) > 1e-7) {
      fail("mrsa seed " + std::to_string(seed));
      break;
    }
  }

  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const Vector v = oracle::random_matrix(1 + seed % 7, 1, 20000 + seed, -2, 2).col(0);
    if ((linalg::project_simplex(v) - oracle::simplex_projection_kkt(v)).cwiseAbs().maxCoeff() > 1e-12) {
      fail("simplex projection seed " + std::to_string(seed));
      break;
    }
  }

  double worst_ab = 0.0, worst_sum = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const DenseMatrix dict = oracle::random_matrix(5, 3, 30000 + seed);
    DenseMatrix a(5, 13);
    a << dict, oracle::random_matrix(5, 10, 31000 + seed, -0.5, 1.5);
    const auto res = evalkit::abundance(a, {0, 1, 2});
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      worst_sum = std::max(worst_sum, std::abs(res.h.col(j).sum() - 1.0));
      const double got = (a.col(j) - dict * res.h.col(j)).squaredNorm();
      worst_ab = std::max(worst_ab, std::abs(got - oracle::simplex_ls_active_set(dict, a.col(j))));
    }
  }
  if (worst_sum > 1e-8 || worst_ab > 1e-6) fail("abundance");

  std::size_t clusters = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    const auto n = static_cast<Eigen::Index>(2 + seed % 11);
    const std::size_t r = 1 + seed % 4;
    DenseMatrix a = oracle::random_matrix(3, n, 40000 + seed);
    if (seed % 2 == 0) a = (a * 4.0).array().floor().matrix();
    Vector p = oracle::random_matrix(n, 1, 41000 + seed).col(0);
    p *= static_cast<double>(r) / p.sum();
    p = p.cwiseMin(1.0);
    oracle::BruteCluster want;
    if (!oracle::min_diam_brute(a, p, r, want)) continue;
    const auto got = postprocess::min_diam_cluster(a, p, r);
    if (got.anchor != want.anchor || got.members != want.members || got.diameter != want.diameter) {
      fail("min_diam_cluster seed " + std::to_string(seed));
      break;
    }
    ++clusters;
  }

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = static_cast<Eigen::Index>(1 + seed % 6);
    const DenseMatrix est = oracle::random_matrix(8, r, 50000 + seed);
    const DenseMatrix refs = oracle::random_matrix(8, r, 51000 + seed);
    DenseMatrix cost(r, r);
    for (Eigen::Index i = 0; i < r; ++i) {
      for (Eigen::Index j = 0; j < r; ++j) cost(i, j) = linalg::mrsa(Vector(est.col(i)), Vector(refs.col(j)));
    }
    const double best = oracle::best_permutation_cost(cost);
    if (std::abs(evalkit::match_mrsa(est, refs).average_mrsa * static_cast<double>(r) - best) > 1e-12) {
      fail("match_mrsa seed " + std::to_string(seed));
      break;
    }
  }

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const DenseMatrix a = oracle::random_matrix(1 + seed % 13, 1 + seed % 7, 60000 + seed, -1e9, 1e9);
    const DenseMatrix b = datagen::decode_dmat(datagen::encode_dmat(a));
    if (b.rows() != a.rows() || b.cols() != a.cols() ||
        std::memcmp(a.data(), b.data(), static_cast<std::size_t>(a.size()) * sizeof(double)) != 0) {
      fail("dmat seed " + std::to_string(seed));
      break;
    }
  }

  std::ostringstream head;
  head << "l1 x1000, mrsa x500, projection x300, abundance max |col sum - 1| " << worst_sum << " max objective gap "
       << worst_ab << ", min_diam x" << clusters << ", match_mrsa x200, dmat x200" << s.str();
  o.detail = head.str();
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  // --cap SECONDS bounds the direct solve in criterion 5.
  double cap = 120.0;
  // --only N runs a single criterion (4 is always reported).
  // --expect-fail N marks a criterion whose failure is documented; its line
  // still reads FAIL but does not change the exit status.
  int only = 0;
  std::vector<int> expected_fail;
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::strcmp(argv[i], "--cap") == 0) cap = std::stod(argv[i + 1]);
    if (std::strcmp(argv[i], "--only") == 0) only = std::stoi(argv[i + 1]);
    if (std::strcmp(argv[i], "--expect-fail") == 0) expected_fail.push_back(std::stoi(argv[i + 1]));
  }
  model::reset_duality_audit();

  bool all = true;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
    if (only != 0 && id != only && id != 4) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const bool expected = std::find(expected_fail.begin(), expected_fail.end(), id) != expected_fail.end();
    const char* status = o.pass ? (expected ? "PASS (unexpected)" : "PASS") : (expected ? "FAIL (expected)" : "FAIL");
    all = all && (o.pass != expected);
    std::printf("criterion %d %s: %s (%.1f s) %s\n", id, name, status, seconds_since(t0), o.detail.c_str());
    std::fflush(stdout);
  };

  report(1, "oracle equivalence", oracle_equivalence);
  report(2, "noiseless recovery", noiseless_recovery);
  report(3, "duplicated pure columns", duplicated_pure_columns);
  report(5, "timing trend", [cap] { return timing_trend(cap); });
  report(6, "noise sweep", noise_sweep);
  report(7, "property suites", property_suites);
  // Criterion 4 covers every subproblem solved above.
  report(4, "duality invariants", [] {
    const auto audit = model::duality_audit();
    Outcome o;
    o.pass = audit.solves > 0 && audit.gap_violations == 0 && audit.sign_violations == 0;
    std::ostringstream s;
    s << audit.solves << " solves, max relative gap " << audit.max_relative_gap << ", max v* " << audit.max_v_star;
    o.detail = s.str();
    return o;
  });
  return all ? 0 : 1;
}
