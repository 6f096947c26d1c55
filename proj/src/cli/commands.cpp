#include "eeht/baselines.hpp"
#include "eeht/cli.hpp"
#include "eeht/datagen.hpp"
#include "eeht/evalkit.hpp"
#include "eeht/model.hpp"
#include "eeht/postprocess.hpp"
#include "eeht/rce.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <sstream>

namespace eeht::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

// Raised for inconsistent flag combinations detected after parsing.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

json trace_json(const rce::RceTrace& trace) {
  json rounds = json::array();
  for (std::size_t k = 0; k < trace.rounds.size(); ++k) {
    const auto& r = trace.rounds[k];
    rounds.push_back({{"round", k},
                      {"ell", r.ell},
                      {"u_star", r.u_star},
                      {"v_star", r.v_star},
                      {"c1_violators", r.c1_violators},
                      {"c2_violators", r.c2_violators},
                      {"lp_iterations", r.lp_iterations},
                      {"seconds", r.seconds}});
  }
  return {{"converged", trace.converged}, {"rounds", rounds}};
}

std::string fmt(double x) {
  std::ostringstream ss;
  ss << std::setprecision(17) << x;
  return ss.str();
}

fs::path manifest_path_for(const fs::path& out) {
  fs::path p = out;
  p += ".manifest.json";
  return p;
}

void record_output(RunManifest& m, const fs::path& p) { m.output_digests[p.string()] = sha256_file(p); }

void record_input(RunManifest& m, const fs::path& p) { m.input_digests[p.string()] = sha256_file(p); }

// ---- synth -----------------------------------------------------------------

struct SynthArgs {
  std::size_t d = 0, n = 0, r = 0;
  double nu = 0.0;
  std::uint64_t seed = 0;
  std::string out;
};

void cmd_synth(const SynthArgs& a, RunManifest& m, std::ostream& log) {
  const auto t0 = Clock::now();
  const auto inst = datagen::gen_synthetic(a.d, a.n, a.r, a.nu, a.seed);
  m.timings["generate"] = since(t0);
  const fs::path dir(a.out);
  fs::create_directories(dir);
  const std::pair<const char*, const DenseMatrix*> mats[] = {
      {"A.dmat", &inst.a}, {"W.dmat", &inst.w}, {"H.dmat", &inst.h}, {"V.dmat", &inst.v}};
  for (const auto& [name, mat] : mats) {
    datagen::write_matrix(dir / name, *mat);
    record_output(m, dir / name);
  }
  datagen::write_index_set(dir / "pure.json", inst.pure_indices);
  record_output(m, dir / "pure.json");
  m.seed = a.seed;
  m.parameters = {{"d", a.d}, {"n", a.n}, {"r", a.r}, {"nu", a.nu}, {"seed", a.seed}, {"out", a.out}};
  m.timings["total"] = since(t0);
  write_manifest(dir / "manifest.json", m);
  log << "wrote " << dir.string() << " (A " << a.d << "x" << a.n << ", r=" << a.r << ")\n";
}

// ---- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::string input;
  std::size_t r = 0;
  std::string method = "eeht-c";
  std::size_t lambda = 10;
  std::size_t mu = 100;
  std::uint64_t seed = 0;
  bool no_reduce = false;
  std::string out;
};

void cmd_extract(const ExtractArgs& a, RunManifest& m, std::ostream& log) {
  const fs::path in(a.input);
  const DenseMatrix mat = datagen::read_matrix(in);
  record_input(m, in);
  m.seed = a.seed;
  m.parameters = {{"input", a.input}, {"r", a.r},         {"method", a.method},        {"lambda", a.lambda},
                  {"mu", a.mu},       {"seed", a.seed},   {"reduce", !a.no_reduce},    {"out", a.out}};
  json result = {{"method", a.method}};
  const auto t0 = Clock::now();
  if (a.method == "spa") {
    DenseMatrix work = mat;
    if (!a.no_reduce) work = linalg::truncated_svd(mat, a.r).reduced();
    result["indices"] = baselines::spa(work, a.r);
    result["objective"] = nullptr;
  } else {
    postprocess::Method method;
    if (a.method == "eeht-a") method = postprocess::Method::DiagTopR;
    else if (a.method == "eeht-b") method = postprocess::Method::MaxPoint;
    else method = postprocess::Method::CentroidMrsa;
    rce::RceConfig cfg;
    cfg.r = a.r;
    cfg.lambda = a.lambda;
    cfg.mu = a.mu;
    cfg.seed = a.seed;
    const auto res = postprocess::eeht_extract(mat, cfg, method, !a.no_reduce);
    result["indices"] = res.indices;
    result["objective"] = res.objective;
    result["trace"] = trace_json(res.trace);
    json clusters = json::array();
    for (const auto& c : res.selection.clusters) clusters.push_back(c);
    result["clusters"] = clusters;
    m.timings["reduce"] = res.seconds_reduce;
    m.timings["rce"] = res.seconds_rce;
    m.timings["select"] = res.seconds_select;
  }
  m.timings["total"] = since(t0);
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  datagen::write_file_atomic(out, result.dump(2) + "\n");
  record_output(m, out);
  write_manifest(manifest_path_for(out), m);
  log << "indices " << result["indices"].dump() << "\n";
}

// ---- eval ------------------------------------------------------------------

struct EvalArgs {
  std::string est, input, refs, out;
};

void cmd_eval(const EvalArgs& a, RunManifest& m, std::ostream& log) {
  const IndexSet idx = datagen::read_index_set(a.est);
  const DenseMatrix mat = datagen::read_matrix(a.input);
  const DenseMatrix refs = datagen::read_matrix(a.refs);
  record_input(m, a.est);
  record_input(m, a.input);
  record_input(m, a.refs);
  m.parameters = {{"est", a.est}, {"input", a.input}, {"refs", a.refs}, {"out", a.out}};
  if (idx.size() != static_cast<std::size_t>(refs.cols())) {
    throw DomainError("eval: index set size differs from the number of reference columns");
  }
  const auto t0 = Clock::now();
  const auto rep = evalkit::match_mrsa(linalg::select_columns(mat, idx), refs);
  m.timings["total"] = since(t0);
  std::ostringstream csv;
  csv << "endmember,index,matched_ref,mrsa_x100\n";
  for (std::size_t k = 0; k < idx.size(); ++k) {
    csv << k << "," << idx[k] << "," << rep.permutation[k] << "," << fmt(100.0 * rep.per_endmember_mrsa[k]) << "\n";
  }
  csv << "average,,," << fmt(100.0 * rep.average_mrsa) << "\n";
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  datagen::write_file_atomic(out, csv.str());
  record_output(m, out);
  write_manifest(manifest_path_for(out), m);
  log << "average MRSA x100 = " << 100.0 * rep.average_mrsa << "\n";
}

// ---- abundance -------------------------------------------------------------

struct AbundanceArgs {
  std::string input, indices, out, maps;
  std::size_t width = 0, height = 0;
  double tol = 1e-9;
  std::size_t max_iter = 10000;
};

void cmd_abundance(const AbundanceArgs& a, RunManifest& m, std::ostream& log) {
  const DenseMatrix mat = datagen::read_matrix(a.input);
  const IndexSet idx = datagen::read_index_set(a.indices);
  record_input(m, a.input);
  record_input(m, a.indices);
  m.parameters = {{"input", a.input}, {"indices", a.indices}, {"out", a.out},        {"maps", a.maps},
                  {"width", a.width}, {"height", a.height},   {"tol", a.tol},        {"max_iter", a.max_iter}};
  if (!a.maps.empty() && a.width * a.height != static_cast<std::size_t>(mat.cols())) {
    throw UsageError("abundance: --width x --height must equal the number of pixels");
  }
  const auto t0 = Clock::now();
  const auto res = evalkit::abundance(mat, idx, {a.tol, a.max_iter});
  m.timings["solve"] = since(t0);
  m.parameters["converged"] = res.converged;
  m.parameters["iterations"] = res.iterations;
  m.parameters["objective"] = res.objective;
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  datagen::write_matrix(out, res.h);
  record_output(m, out);
  if (!a.maps.empty()) {
    const fs::path dir(a.maps);
    fs::create_directories(dir);
    for (Eigen::Index k = 0; k < res.h.rows(); ++k) {
      const fs::path p = dir / ("endmember_" + std::to_string(k) + ".pgm");
      datagen::write_file_atomic(p, evalkit::encode_pgm(res.h.row(k).transpose(), a.width, a.height));
      record_output(m, p);
    }
  }
  write_manifest(manifest_path_for(out), m);
  if (!res.converged) log << "warning: abundance solve hit max_iter on some columns\n";
  log << "objective " << res.objective << "\n";
}

// ---- density ---------------------------------------------------------------

struct DensityArgs {
  std::string input, hist, keep;
  double phi = 0.4, omega = 0.1, bin_width = 0.01;
};

void cmd_density(const DensityArgs& a, RunManifest& m, std::ostream& log) {
  const DenseMatrix mat = datagen::read_matrix(a.input);
  record_input(m, a.input);
  m.parameters = {{"input", a.input}, {"phi", a.phi}, {"omega", a.omega},
                  {"bin_width", a.bin_width}, {"hist", a.hist}, {"keep", a.keep}};
  const auto t0 = Clock::now();
  const auto prof = evalkit::neighborhood_density(mat, a.phi);
  const auto counts = evalkit::density_histogram(prof.rho, a.bin_width);
  const IndexSet kept = evalkit::filter_isolated(prof, a.omega);
  m.timings["total"] = since(t0);
  std::ostringstream csv;
  csv << "bin_lo,bin_hi,count\n";
  for (std::size_t k = 0; k < counts.size(); ++k) {
    csv << fmt(static_cast<double>(k) * a.bin_width) << ","
        << fmt(std::min(1.0, static_cast<double>(k + 1) * a.bin_width)) << "," << counts[k] << "\n";
  }
  for (const fs::path& p : {fs::path(a.hist), fs::path(a.keep)}) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
  }
  datagen::write_file_atomic(a.hist, csv.str());
  datagen::write_index_set(a.keep, kept);
  record_output(m, a.hist);
  record_output(m, a.keep);
  write_manifest(manifest_path_for(a.keep), m);
  log << "kept " << kept.size() << " of " << mat.cols() << " pixels (flagged " << mat.cols() - static_cast<Eigen::Index>(kept.size())
      << ")\n";
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
  BenchConfig cfg;
  std::string out = "timings.csv";
};

void cmd_bench(const BenchArgs& a, RunManifest& m, std::ostream& log) {
  const BenchConfig& c = a.cfg;
  m.seed = c.seed;
  m.parameters = {{"sizes", c.sizes}, {"d", c.d},           {"r", c.r},
                  {"trials", c.trials}, {"seed", c.seed},   {"nu", c.nu},
                  {"direct_cap", c.direct_cap}, {"lambda", c.lambda}, {"mu", c.mu},
                  {"out", a.out}};
  const auto t0 = Clock::now();
  const auto rows = run_bench(c, &log);
  m.timings["total"] = since(t0);
  std::ostringstream csv;
  csv << "n,trials,rce_sr_seconds,rce_dir_seconds,direct_seconds,direct_capped,"
         "rce_sr_objective,rce_dir_objective,direct_objective\n";
  for (const auto& r : rows) {
    csv << r.n << "," << c.trials << "," << fmt(r.rce_sr_seconds) << "," << fmt(r.rce_dir_seconds) << ","
        << fmt(r.direct_seconds) << "," << r.direct_capped << "," << fmt(r.rce_sr_objective) << ","
        << fmt(r.rce_dir_objective) << "," << fmt(r.direct_objective) << "\n";
  }
  const fs::path out(a.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  datagen::write_file_atomic(out, csv.str());
  record_output(m, out);
  write_manifest(manifest_path_for(out), m);
}

std::size_t parse_count(const std::string& s) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || s.empty() || s.front() == '-') throw UsageError("bench: bad size '" + s + "'");
  return static_cast<std::size_t>(v);
}

}  // namespace

std::vector<BenchRow> run_bench(const BenchConfig& cfg, std::ostream* log) {
  if (cfg.sizes.empty() || cfg.trials < 1) throw DomainError("bench: need at least one size and one trial");
  std::vector<BenchRow> rows;
  for (std::size_t n : cfg.sizes) {
    BenchRow row;
    row.n = n;
    double direct_obj_sum = 0.0;
    std::size_t direct_ok = 0;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const std::uint64_t inst_seed = cfg.seed + 7919 * t + n;
      const auto inst = datagen::gen_synthetic(cfg.d, n, cfg.r, cfg.nu, inst_seed);
      rce::RceConfig rc;
      rc.r = cfg.r;
      rc.lambda = cfg.lambda;
      rc.mu = cfg.mu;
      rc.seed = cfg.seed;

      auto t0 = Clock::now();
      const DenseMatrix reduced = linalg::truncated_svd(inst.a, cfg.r).reduced();
      const auto sr = rce::rce_solve(reduced, rc);
      const double sr_time = since(t0);
      row.rce_sr_seconds += sr_time;
      row.rce_sr_objective += sr.objective;

      double dir_time = 0.0;
      if (cfg.rce_dir) {
        t0 = Clock::now();
        const auto dir = rce::rce_solve(inst.a, rc);
        dir_time = since(t0);
        row.rce_dir_seconds += dir_time;
        row.rce_dir_objective += dir.objective;
      }

      double direct_time = 0.0;
      bool capped = false;
      if (cfg.direct) {
        IndexSet all(n);
        std::iota(all.begin(), all.end(), 0);
        lp::ToleranceConfig tol;
        tol.time_limit_seconds = cfg.direct_cap;
        t0 = Clock::now();
        try {
          const DenseMatrix red = linalg::truncated_svd(inst.a, cfg.r).reduced();
          const auto sub = model::solve_subproblem(red, all, cfg.r, tol);
          direct_time = since(t0);
          direct_obj_sum += sub.u_star;
          ++direct_ok;
          row.max_sr_direct_gap = std::max(row.max_sr_direct_gap, std::abs(sub.u_star - sr.objective));
        } catch (const model::SolverError& e) {
          if (!e.time_limited()) throw;
          direct_time = std::max(since(t0), cfg.direct_cap);
          capped = true;
          ++row.direct_capped;
        }
        row.direct_seconds += direct_time;
      }
      if (log) {
        *log << "n=" << n << " trial=" << t << " rce-sr=" << sr_time << "s";
        if (cfg.rce_dir) *log << " rce-dir=" << dir_time << "s";
        if (cfg.direct) *log << " direct=" << direct_time << "s" << (capped ? " (capped)" : "");
        *log << "\n";
      }
    }
    const auto k = static_cast<double>(cfg.trials);
    row.rce_sr_seconds /= k;
    row.rce_dir_seconds /= k;
    row.direct_seconds /= k;
    row.rce_sr_objective /= k;
    row.rce_dir_objective /= k;
    row.direct_objective =
        direct_ok > 0 ? direct_obj_sum / static_cast<double>(direct_ok) : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(row);
  }
  return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Endmember extraction with Hottopixx models"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  RunManifest manifest;
  std::function<void()> action;

  SynthArgs synth;
  auto* s = app.add_subcommand("synth", "Generate a synthetic separable instance");
  s->add_option("--d", synth.d, "Number of bands")->required();
  s->add_option("--n", synth.n, "Number of pixels")->required();
  s->add_option("--r", synth.r, "Number of endmembers")->required();
  s->add_option("--nu", synth.nu, "Noise level ||V||_1")->required()->check(CLI::NonNegativeNumber);
  s->add_option("--seed", synth.seed, "Random seed");
  s->add_option("--out", synth.out, "Output directory")->required();
  s->callback([&] { action = [&] { cmd_synth(synth, manifest, out); }; });

  ExtractArgs ex;
  auto* e = app.add_subcommand("extract", "Extract r endmember indices");
  e->add_option("--input", ex.input, "Input matrix (.dmat or .csv)")->required();
  e->add_option("--r", ex.r, "Number of endmembers")->required()->check(CLI::PositiveNumber);
  e->add_option("--method", ex.method, "eeht-a | eeht-b | eeht-c | spa")
      ->check(CLI::IsMember({"eeht-a", "eeht-b", "eeht-c", "spa"}));
  e->add_option("--lambda", ex.lambda, "Neighbours per SPA pick")->check(CLI::PositiveNumber);
  e->add_option("--mu", ex.mu, "Random extra indices");
  e->add_option("--seed", ex.seed, "Random seed");
  e->add_flag("--no-reduce", ex.no_reduce, "Skip the truncated-SVD size reduction");
  e->add_option("--out", ex.out, "Output JSON")->required();
  e->callback([&] { action = [&] { cmd_extract(ex, manifest, out); }; });

  EvalArgs ev;
  auto* v = app.add_subcommand("eval", "Matched MRSA against reference signatures");
  v->add_option("--est", ev.est, "Index set JSON")->required();
  v->add_option("--input", ev.input, "Input matrix")->required();
  v->add_option("--refs", ev.refs, "Reference signatures matrix")->required();
  v->add_option("--out", ev.out, "Output CSV")->required();
  v->callback([&] { action = [&] { cmd_eval(ev, manifest, out); }; });

  AbundanceArgs ab;
  auto* b = app.add_subcommand("abundance", "Simplex-constrained abundances and maps");
  b->add_option("--input", ab.input, "Input matrix")->required();
  b->add_option("--indices", ab.indices, "Index set JSON")->required();
  b->add_option("--width", ab.width, "Image width in pixels");
  b->add_option("--height", ab.height, "Image height in pixels");
  b->add_option("--out", ab.out, "Output H.dmat")->required();
  b->add_option("--maps", ab.maps, "Directory for P5 maps");
  b->add_option("--tol", ab.tol, "Relative objective change tolerance")->check(CLI::NonNegativeNumber);
  b->add_option("--max-iter", ab.max_iter, "Iteration cap per column")->check(CLI::PositiveNumber);
  b->callback([&] { action = [&] { cmd_abundance(ab, manifest, out); }; });

  DensityArgs de;
  auto* dn = app.add_subcommand("density", "Neighbourhood density and isolated-pixel filter");
  dn->add_option("--input", de.input, "Input matrix")->required();
  dn->add_option("--phi", de.phi, "MRSA radius")->check(CLI::Range(0.0, 1.0));
  dn->add_option("--omega", de.omega, "Density threshold");
  dn->add_option("--bin-width", de.bin_width, "Histogram bin width")->check(CLI::Range(1e-6, 1.0));
  dn->add_option("--hist", de.hist, "Output histogram CSV")->required();
  dn->add_option("--keep", de.keep, "Output kept-index JSON")->required();
  dn->callback([&] { action = [&] { cmd_density(de, manifest, out); }; });

  BenchArgs be;
  std::vector<std::string> sizes;
  auto* bn = app.add_subcommand("bench", "Timing comparison of RCE and the direct LP");
  bn->add_option("--sizes", sizes, "Comma-separated n values")->required()->delimiter(',');
  bn->add_option("--d", be.cfg.d, "Number of bands");
  bn->add_option("--r", be.cfg.r, "Number of endmembers");
  bn->add_option("--trials", be.cfg.trials, "Trials per size")->check(CLI::PositiveNumber);
  bn->add_option("--seed", be.cfg.seed, "Random seed");
  bn->add_option("--nu", be.cfg.nu, "Noise level")->check(CLI::NonNegativeNumber);
  bn->add_option("--cap", be.cfg.direct_cap, "Time cap for the direct LP (seconds)")->check(CLI::PositiveNumber);
  bn->add_option("--out", be.out, "Output CSV");
  bn->callback([&] {
    action = [&] {
      be.cfg.sizes.clear();
      for (const auto& x : sizes) be.cfg.sizes.push_back(parse_count(x));
      cmd_bench(be, manifest, out);
    };
  });

  std::string replay_path;
  auto* rp = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  rp->add_option("--manifest", replay_path, "Manifest JSON")->required();
  rp->callback([&] { action = nullptr; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex2) {
    return app.exit(ex2, out, err) == 0 ? kOk : kUsage;
  }

  try {
    if (!replay_path.empty()) {
      const RunManifest old = read_manifest(replay_path);
      std::vector<std::string> args{"eeht"};
      args.insert(args.end(), old.argv.begin(), old.argv.end());
      if (args.size() > 1 && args[1] == "replay") throw UsageError("replay: manifest records a replay");
      return run(args, out, err);
    }
    for (const CLI::App* sub : app.get_subcommands()) manifest.command = sub->get_name();
    for (int i = 1; i < argc; ++i) manifest.argv.emplace_back(argv[i]);
    action();
    return kOk;
  } catch (const UsageError& ex2) {
    err << "usage error: " << ex2.what() << "\n";
    return kUsage;
  } catch (const DomainError& ex2) {
    err << "error: " << ex2.what() << "\n";
    return kUsage;
  } catch (const datagen::IoError& ex2) {
    err << "i/o error: " << ex2.what() << "\n";
    return kUsage;
  } catch (const rce::RceError& ex2) {
    err << "numerical failure: " << ex2.what() << "\n" << trace_json(ex2.trace()).dump(2) << "\n";
    return kNumerical;
  } catch (const std::exception& ex2) {
    err << "failure: " << ex2.what() << "\n";
    return kNumerical;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace eeht::cli
