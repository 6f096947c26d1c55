#include "eeht/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace eeht::linalg {

void require_valid(const DenseMatrix& a, const char* what) {
  if (a.rows() < 1 || a.cols() < 1) {
    throw DomainError(std::string(what) + ": empty matrix");
  }
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": non-finite entry");
  }
}

double l1_norm(const DenseMatrix& a) {
  require_valid(a);
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

std::pair<DenseMatrix, DenseMatrix> pos_neg_split(const DenseMatrix& a) {
  require_valid(a);
  DenseMatrix pos = a.cwiseMax(0.0);
  DenseMatrix neg = pos - a;
  return {std::move(pos), std::move(neg)};
}

DenseMatrix SvdTruncation::reduced() const { return sigma.asDiagonal() * v.transpose(); }

DenseMatrix SvdTruncation::reconstruct() const { return u * sigma.asDiagonal() * v.transpose(); }

SvdTruncation truncated_svd(const DenseMatrix& a, std::size_t r) {
  require_valid(a);
  const auto k = static_cast<std::size_t>(std::min(a.rows(), a.cols()));
  if (r < 1 || r > k) {
    throw DomainError("truncated_svd: rank must lie in [1, min(rows, cols)]");
  }
  Eigen::BDCSVD<DenseMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) {
    throw NumericalError("truncated_svd: SVD did not converge");
  }
  const auto rr = static_cast<Eigen::Index>(r);
  SvdTruncation out;
  out.u = svd.matrixU().leftCols(rr);
  out.sigma = svd.singularValues().head(rr);
  out.v = svd.matrixV().leftCols(rr);
  // Fix the sign of each singular pair so the largest-magnitude entry of
  // u_k is positive; keeps the reduced matrix reproducible across builds.
  for (Eigen::Index c = 0; c < rr; ++c) {
    Eigen::Index imax = 0;
    out.u.col(c).cwiseAbs().maxCoeff(&imax);
    if (out.u(imax, c) < 0.0) {
      out.u.col(c) *= -1.0;
      out.v.col(c) *= -1.0;
    }
  }
  return out;
}

double mrsa(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw DomainError("mrsa: vectors must have equal length >= 2");
  }
  const auto n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - ma;
    const double y = b[i] - mb;
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na <= 0.0 || nb <= 0.0) {
    throw DomainError("mrsa: constant vector has no direction");
  }
  const double cosine = std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
  return std::acos(cosine) / std::numbers::pi;
}

double mrsa(const Vector& a, const Vector& b) {
  return mrsa(std::span<const double>(a.data(), static_cast<std::size_t>(a.size())),
              std::span<const double>(b.data(), static_cast<std::size_t>(b.size())));
}

Vector project_simplex(const Vector& v) {
  if (v.size() == 0) {
    throw DomainError("project_simplex: empty vector");
  }
  if (!v.allFinite()) {
    throw DomainError("project_simplex: non-finite entry");
  }
  // Sort-based threshold search (Held, Wolfe & Crowder).
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) {
      theta = t;
    }
  }
  Vector out = (v.array() - theta).cwiseMax(0.0);
  // Absorb the rounding left over by the threshold so the sum is exact to
  // a few ulps; distribute over the support only.
  const double s = out.sum();
  if (s > 0.0) {
    out /= s;
  }
  return out;
}

DenseMatrix select_columns(const DenseMatrix& a, std::span<const std::size_t> idx) {
  DenseMatrix out(a.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] >= static_cast<std::size_t>(a.cols())) {
      throw DomainError("select_columns: index out of range");
    }
    out.col(static_cast<Eigen::Index>(k)) = a.col(static_cast<Eigen::Index>(idx[k]));
  }
  return out;
}

DenseMatrix normalize_columns_l1(const DenseMatrix& a) {
  require_valid(a);
  DenseMatrix out = a;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    const double s = a.col(j).cwiseAbs().sum();
    if (s <= 0.0) {
      throw DomainError("normalize_columns_l1: zero column");
    }
    out.col(j) /= s;
  }
  return out;
}

}  // namespace eeht::linalg
