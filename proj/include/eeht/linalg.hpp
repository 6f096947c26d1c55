#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace eeht {

/// Dense real matrix. Column-major; columns are pixels / spectra everywhere
/// in this library.
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Ordered set of zero-based column indices.
using IndexSet = std::vector<std::size_t>;

/// Raised when an input violates a documented precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative numerical routine fails.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace linalg {

/// Throws DomainError unless `a` is non-empty and every entry is finite.
void require_valid(const DenseMatrix& a, const char* what = "matrix");

/// Max column absolute sum, i.e. the induced L1 norm.
double l1_norm(const DenseMatrix& a);

/// Splits `a` into nonnegative parts with `a = pos - neg`.
std::pair<DenseMatrix, DenseMatrix> pos_neg_split(const DenseMatrix& a);

struct SvdTruncation {
  DenseMatrix u;      // d x r, orthonormal columns
  Vector sigma;       // r, nonincreasing
  DenseMatrix v;      // n x r, orthonormal columns

  /// Sigma_r V_r^T, the r x n size-reduced matrix.
  DenseMatrix reduced() const;
  DenseMatrix reconstruct() const;
};

/// Top-r singular triplets of `a`. Requires 1 <= r <= min(rows, cols).
SvdTruncation truncated_svd(const DenseMatrix& a, std::size_t r);

/// Mean-removed spectral angle, scaled to [0, 1].
///
/// Both inputs must have the same length (>= 2) and a nonzero mean-removed
/// norm; otherwise DomainError is thrown.
double mrsa(std::span<const double> a, std::span<const double> b);
double mrsa(const Vector& a, const Vector& b);

/// Euclidean projection onto the probability simplex {x >= 0, sum x = 1}.
Vector project_simplex(const Vector& v);

/// Columns of `a` listed in `idx`, in that order.
DenseMatrix select_columns(const DenseMatrix& a, std::span<const std::size_t> idx);

/// Normalizes each column to unit L1 norm. Zero columns raise DomainError.
DenseMatrix normalize_columns_l1(const DenseMatrix& a);

}  // namespace linalg
}  // namespace eeht
