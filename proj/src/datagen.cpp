#include "eeht/datagen.hpp"

#include "eeht/evalkit.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

namespace eeht::datagen {

namespace fs = std::filesystem;

SyntheticInstance gen_synthetic(std::size_t d, std::size_t n, std::size_t r, double nu, std::uint64_t seed) {
  if (r < 1 || r > d || d > n) throw DomainError("gen_synthetic: requires 1 <= r <= d <= n");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("gen_synthetic: nu must be finite and nonnegative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto dd = static_cast<Eigen::Index>(d);
  const auto nn = static_cast<Eigen::Index>(n);
  const auto rr = static_cast<Eigen::Index>(r);

  SyntheticInstance out;
  out.nu = nu;
  out.w.resize(dd, rr);
  for (Eigen::Index j = 0; j < rr; ++j) {
    for (Eigen::Index i = 0; i < dd; ++i) out.w(i, j) = std::abs(unif(rng));
  }
  out.w = linalg::normalize_columns_l1(out.w);

  std::vector<double> alpha(r);
  for (double& x : alpha) {
    do {
      x = unif(rng);
    } while (!(x > 0.0));
  }
  std::vector<std::gamma_distribution<double>> gammas;
  for (double x : alpha) gammas.emplace_back(x, 1.0);
  DenseMatrix hbar(rr, nn - rr);
  for (Eigen::Index j = 0; j < hbar.cols(); ++j) {
    double s = 0.0;
    do {
      for (Eigen::Index i = 0; i < rr; ++i) hbar(i, j) = gammas[static_cast<std::size_t>(i)](rng);
      s = hbar.col(j).sum();
    } while (!(s > 0.0));
    hbar.col(j) /= s;
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  out.h = DenseMatrix::Zero(rr, nn);
  for (Eigen::Index k = 0; k < nn; ++k) {
    const auto dest = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(k)]);
    if (k < rr) {
      out.h(k, dest) = 1.0;
    } else {
      out.h.col(dest) = hbar.col(k - rr);
    }
  }
  out.pure_indices.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(r));

  std::normal_distribution<double> normal(0.0, 1.0);
  out.v = DenseMatrix::Zero(dd, nn);
  if (nu > 0.0) {
    for (Eigen::Index j = 0; j < nn; ++j) {
      for (Eigen::Index i = 0; i < dd; ++i) out.v(i, j) = normal(rng);
    }
    out.v *= nu / linalg::l1_norm(out.v);
  }
  out.a = out.w * out.h + out.v;
  return out;
}

std::vector<double> noise_grid(std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = static_cast<double>(k + 1) / static_cast<double>(count);
  return out;
}

SemirealInstance build_semireal(const DenseMatrix& a_real, const DenseMatrix& w_ref, double nu) {
  linalg::require_valid(a_real, "build_semireal");
  linalg::require_valid(w_ref, "build_semireal");
  if (w_ref.rows() != a_real.rows()) throw DomainError("build_semireal: reference length differs from band count");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("build_semireal: nu must be finite and nonnegative");
  const DenseMatrix a = linalg::normalize_columns_l1(a_real);
  const Eigen::Index r = w_ref.cols();

  SemirealInstance out;
  for (Eigen::Index i = 0; i < r; ++i) {
    const Vector ref = w_ref.col(i);
    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const double m = linalg::mrsa(Vector(a.col(j)), ref);
      if (m < best_val) {
        best_val = m;
        best = static_cast<std::size_t>(j);
      }
    }
    if (std::find(out.j.begin(), out.j.end(), best) != out.j.end()) {
      throw DomainError("build_semireal: two references match the same column");
    }
    out.j.push_back(best);
  }

  out.w = linalg::select_columns(a, out.j);
  out.h = evalkit::abundance(a, out.j).h;
  for (Eigen::Index i = 0; i < r; ++i) {
    out.h.col(static_cast<Eigen::Index>(out.j[static_cast<std::size_t>(i)])) = Vector::Unit(r, i);
  }
  const DenseMatrix wh = out.w * out.h;
  out.v = a - wh;
  out.v_norm = linalg::l1_norm(out.v);
  if (out.v_norm > 0.0) {
    out.a = wh + (nu / out.v_norm) * out.v;
  } else if (nu == 0.0) {
    out.a = wh;
  } else {
    throw DomainError("build_semireal: residual is zero, cannot scale to nu > 0");
  }
  return out;
}

namespace {

constexpr char kMagic[4] = {'D', 'M', 'A', 'T'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeader = 4 + 4 + 8 + 8;

template <typename T>
void put_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <typename T>
T get_le(const std::string& in, std::size_t pos) {
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  T value;
  std::memcpy(&value, b, sizeof(T));
  return value;
}

std::string lower_ext(const fs::path& p) {
  std::string e = p.extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return e;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_double(std::string s, double& value) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  if (b == std::string::npos) return false;
  s = s.substr(b, e - b + 1);
  if (!s.empty() && s.front() == '+') s.erase(0, 1);
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

}  // namespace

std::string encode_dmat(const DenseMatrix& a) {
  std::string out;
  out.reserve(kHeader + static_cast<std::size_t>(a.size()) * 8);
  out.append(kMagic, 4);
  put_le<std::uint32_t>(out, kVersion);
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(a.rows()));
  put_le<std::uint64_t>(out, static_cast<std::uint64_t>(a.cols()));
  for (Eigen::Index k = 0; k < a.size(); ++k) put_le<double>(out, a.data()[k]);
  return out;
}

DenseMatrix decode_dmat(const std::string& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw IoError(IoError::Kind::Magic, "dmat: bad magic");
  }
  if (bytes.size() < kHeader) throw IoError(IoError::Kind::Truncated, "dmat: truncated header");
  const auto version = get_le<std::uint32_t>(bytes, 4);
  if (version != kVersion) throw IoError(IoError::Kind::Version, "dmat: unsupported version " + std::to_string(version));
  const auto rows = get_le<std::uint64_t>(bytes, 8);
  const auto cols = get_le<std::uint64_t>(bytes, 16);
  const std::uint64_t limit = (std::uint64_t{1} << 40);
  if (rows > limit || cols > limit || (rows != 0 && cols > limit / rows)) {
    throw IoError(IoError::Kind::Truncated, "dmat: implausible dimensions");
  }
  const std::uint64_t count = rows * cols;
  if (bytes.size() - kHeader != count * 8) throw IoError(IoError::Kind::Truncated, "dmat: payload size mismatch");
  DenseMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::uint64_t k = 0; k < count; ++k) {
    const double x = get_le<double>(bytes, kHeader + 8 * k);
    if (!std::isfinite(x)) throw IoError(IoError::Kind::NonFinite, "dmat: non-finite entry");
    a.data()[k] = x;
  }
  return a;
}

DenseMatrix parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto fields = split_fields(line);
    std::vector<double> row;
    bool numeric = true;
    for (const auto& f : fields) {
      double x = 0.0;
      if (!parse_double(f, x)) {
        numeric = false;
        break;
      }
      row.push_back(x);
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;
      }
      throw IoError(IoError::Kind::Parse, "csv: unparsable field on line " + std::to_string(line_no));
    }
    first = false;
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw IoError(IoError::Kind::Parse, "csv: ragged row on line " + std::to_string(line_no));
    }
    for (double x : row) {
      if (!std::isfinite(x)) throw IoError(IoError::Kind::NonFinite, "csv: non-finite entry");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw IoError(IoError::Kind::Parse, "csv: no data rows");
  DenseMatrix a(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return a;
}

void write_file_atomic(const fs::path& path, const std::string& bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(IoError::Kind::Open, "cannot open " + tmp.string() + " for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw IoError(IoError::Kind::Write, "write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(IoError::Kind::Write, "cannot rename onto " + path.string());
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(IoError::Kind::Open, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_matrix(const fs::path& path, const DenseMatrix& a) {
  if (!a.allFinite()) throw IoError(IoError::Kind::NonFinite, "write_matrix: non-finite entry");
  write_file_atomic(path, encode_dmat(a));
}

DenseMatrix read_matrix(const fs::path& path) {
  const std::string bytes = read_file(path);
  if (lower_ext(path) == ".csv") return parse_csv(bytes);
  return decode_dmat(bytes);
}

void write_index_set(const fs::path& path, const IndexSet& idx) {
  write_file_atomic(path, nlohmann::json(idx).dump() + "\n");
}

IndexSet read_index_set(const fs::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(IoError::Kind::Parse, "index set: " + std::string(e.what()));
  }
  // Extraction output wraps the array in an object.
  if (j.is_object() && j.contains("indices")) j = j["indices"];
  if (!j.is_array()) throw IoError(IoError::Kind::Parse, "index set: expected a JSON array");
  IndexSet out;
  for (const auto& x : j) {
    if (!x.is_number_integer() || x.get<long long>() < 0) {
      throw IoError(IoError::Kind::Parse, "index set: entries must be nonnegative integers");
    }
    out.push_back(x.get<std::size_t>());
  }
  return out;
}

}  // namespace eeht::datagen
