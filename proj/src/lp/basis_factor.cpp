#include "basis_factor.hpp"

#include <cmath>

namespace eeht::lp::detail {

bool BasisFactor::factorize(const ColumnSource& src, std::span<const int> basis) {
  m_ = static_cast<int>(basis.size());
  etas_.clear();
  const int n = src.structural();
  const int* outer = src.a->outerIndexPtr();
  const int* inner = src.a->innerIndexPtr();
  const double* val = src.a->valuePtr();

  std::vector<Triplet> trips;
  trips.reserve(basis.size() * 4);
  for (int p = 0; p < m_; ++p) {
    const int j = basis[static_cast<std::size_t>(p)];
    if (j < n) {
      for (int k = outer[j]; k < outer[j + 1]; ++k) {
        trips.emplace_back(inner[k], p, val[k]);
      }
    } else {
      const int row = j - n;
      trips.emplace_back(row, p, src.artificial_sign[static_cast<std::size_t>(row)]);
    }
  }
  SparseMatrix b(m_, m_);
  b.setFromTriplets(trips.begin(), trips.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  return lu_.info() == Eigen::Success;
}

void BasisFactor::ftran(Vector& v) const {
  // B = Prᵀ L U Pcᵀ; permutations are applied by index to avoid the in-place
  // cycle walk Eigen uses for permuted solves.
  const auto& pr = lu_.rowsPermutation().indices();
  const auto& pc = lu_.colsPermutation().indices();
  work_.resize(m_);
  for (int i = 0; i < m_; ++i) work_[pr[i]] = v[i];
  lu_.matrixL().solveInPlace(work_);
  lu_.matrixU().solveInPlace(work_);
  for (int i = 0; i < m_; ++i) v[i] = work_[pc[i]];
  for (const Eta& e : etas_) {
    const double vp = v[e.pivot_row] / e.pivot;
    v[e.pivot_row] = vp;
    if (vp == 0.0) {
      continue;
    }
    for (std::size_t k = 0; k < e.index.size(); ++k) {
      v[e.index[k]] -= e.value[k] * vp;
    }
  }
}

void BasisFactor::btran(Vector& v) const {
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->pivot_row];
    for (std::size_t k = 0; k < it->index.size(); ++k) {
      s -= it->value[k] * v[it->index[k]];
    }
    v[it->pivot_row] = s / it->pivot;
  }
  const auto& pr = lu_.rowsPermutation().indices();
  const auto& pc = lu_.colsPermutation().indices();
  work_.resize(m_);
  for (int i = 0; i < m_; ++i) work_[pc[i]] = v[i];
  lu_.matrixU().template solveTransposedInPlace<false>(work_);
  lu_.matrixL().template solveTransposedInPlace<false>(work_);
  for (int i = 0; i < m_; ++i) v[i] = work_[pr[i]];
}

void BasisFactor::update(int p, const Vector& alpha) {
  Eta e;
  e.pivot_row = p;
  e.pivot = alpha[p];
  for (int i = 0; i < m_; ++i) {
    if (i != p && alpha[i] != 0.0) {
      e.index.push_back(i);
      e.value.push_back(alpha[i]);
    }
  }
  etas_.push_back(std::move(e));
}

}  // namespace eeht::lp::detail
