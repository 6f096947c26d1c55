#pragma once

#include "eeht/lp.hpp"

#include <Eigen/SparseLU>

#include <span>
#include <vector>

namespace eeht::lp::detail {

/// Column source for basis assembly: structural columns come from `a`,
/// indices >= a.cols() are signed unit columns (phase-1 artificials).
struct ColumnSource {
  const SparseMatrix* a = nullptr;
  std::span<const double> artificial_sign;  // one entry per row

  int structural() const { return static_cast<int>(a->cols()); }
};

/// LU factorization of the simplex basis with product-form (eta) updates.
class BasisFactor {
 public:
  /// Returns false if the basis matrix is numerically singular.
  bool factorize(const ColumnSource& src, std::span<const int> basis);

  void ftran(Vector& v) const;
  void btran(Vector& v) const;

  /// Records the replacement of basis position `p` by a column whose FTRAN
  /// image is `alpha`.
  void update(int p, const Vector& alpha);

  std::size_t eta_count() const { return etas_.size(); }

 private:
  struct Eta {
    int pivot_row;
    double pivot;
    std::vector<int> index;
    std::vector<double> value;
  };

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
  std::vector<Eta> etas_;
  mutable Vector work_;
  int m_ = 0;
};

}  // namespace eeht::lp::detail
