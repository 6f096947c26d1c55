#include "eeht/baselines.hpp"

#include <cmath>

namespace eeht::baselines {

IndexSet spa(const DenseMatrix& a, std::size_t r, std::vector<double>* residual_norms) {
  linalg::require_valid(a, "spa");
  const auto d = static_cast<std::size_t>(a.rows());
  const auto n = static_cast<std::size_t>(a.cols());
  if (r < 1 || r > std::min(d, n)) {
    throw DomainError("spa: r must lie in [1, min(d, n)]");
  }
  const double scale = a.colwise().norm().maxCoeff();
  if (scale <= 0.0) {
    throw DomainError("spa: zero matrix");
  }

  DenseMatrix residual = a;
  DenseMatrix basis(a.rows(), static_cast<Eigen::Index>(r));
  IndexSet picked;
  picked.reserve(r);
  if (residual_norms) residual_norms->clear();

  for (std::size_t k = 0; k < r; ++k) {
    const Vector norms = residual.colwise().squaredNorm();
    Eigen::Index best = 0;
    for (Eigen::Index j = 1; j < norms.size(); ++j) {
      if (norms[j] > norms[best]) best = j;
    }
    const double norm = std::sqrt(norms[best]);
    if (norm <= 1e-12 * scale) {
      throw NumericalError("spa: residual vanished before r columns were selected");
    }
    picked.push_back(static_cast<std::size_t>(best));
    if (residual_norms) residual_norms->push_back(norm);

    // Direction of the picked residual, re-orthogonalized against the
    // previous directions from the original column.
    Vector q = a.col(best);
    const auto kk = static_cast<Eigen::Index>(k);
    for (int pass = 0; pass < 2; ++pass) {
      q -= basis.leftCols(kk) * (basis.leftCols(kk).transpose() * q);
    }
    q.normalize();
    basis.col(kk) = q;
    residual -= q * (q.transpose() * residual);
  }
  return picked;
}

}  // namespace eeht::baselines
