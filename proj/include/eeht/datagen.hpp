#pragma once

#include "eeht/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace eeht::datagen {

/// A = W·H + V with H = [I, H̄]Π.
struct SyntheticInstance {
  DenseMatrix a;
  DenseMatrix w;  // d×r, unit L1 columns
  DenseMatrix h;  // r×n, columns on the simplex
  DenseMatrix v;  // d×n, ‖V‖₁ = nu
  IndexSet pure_indices;  // column of A holding endmember k
  double nu = 0.0;
};

/// Seeded synthetic instance: W uniform on [0,1] (absolute value taken,
/// columns L1-normalized), H̄ Dirichlet with parameters drawn uniform on
/// (0,1) once per instance, V standard normal rescaled to ‖V‖₁ = nu, and a
/// seeded uniform placement of the r pure columns. Requires 1 ≤ r ≤ d ≤ n
/// and nu ≥ 0.
SyntheticInstance gen_synthetic(std::size_t d, std::size_t n, std::size_t r, double nu, std::uint64_t seed);

/// The `count` equally spaced levels k/count, k = 1..count.
std::vector<double> noise_grid(std::size_t count);

struct SemirealInstance {
  DenseMatrix a;  // W·H + (nu/‖V‖₁)·V
  DenseMatrix w;
  DenseMatrix h;
  DenseMatrix v;  // residual of the normalized real matrix
  IndexSet j;     // j_i for reference i
  double v_norm = 0.0;  // ‖V‖₁
};

/// Normalizes A_real, matches each reference to its nearest column under
/// MRSA, solves Q(A_real, J) with H(:,J) = I, and rescales the residual to
/// ‖·‖₁ = nu. Throws DomainError if two references pick the same column.
SemirealInstance build_semireal(const DenseMatrix& a_real, const DenseMatrix& w_ref, double nu);

/// Structured file I/O failure.
class IoError : public std::runtime_error {
 public:
  enum class Kind { Open, Magic, Version, Truncated, NonFinite, Parse, Write };
  IoError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// DMAT layout: "DMAT", u32 version = 1, u64 rows, u64 cols, then
/// rows·cols little-endian float64 in column-major order.
std::string encode_dmat(const DenseMatrix& a);
DenseMatrix decode_dmat(const std::string& bytes);

/// Comma-separated rows with an optional single header line.
DenseMatrix parse_csv(const std::string& text);

/// Writes DMAT atomically. Reads DMAT, or CSV when the extension is .csv.
void write_matrix(const std::filesystem::path& path, const DenseMatrix& a);
DenseMatrix read_matrix(const std::filesystem::path& path);

/// Index sets as JSON arrays of zero-based integers.
void write_index_set(const std::filesystem::path& path, const IndexSet& idx);
IndexSet read_index_set(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);
std::string read_file(const std::filesystem::path& path);

}  // namespace eeht::datagen
