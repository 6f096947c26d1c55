#pragma once

#include "eeht/linalg.hpp"
#include "eeht/rce.hpp"

#include <string>
#include <vector>

/// Clustering postprocessing of the Hottopixx diagonal and the end-to-end
/// extraction pipeline.
///
/// For an anchor column i, Ω_i is the chain of prefixes of the columns
/// ordered by L1 distance to a_i (the anchor first, then ascending distance,
/// ties by index). A cluster's score is the sum of the point list over its
/// members and its diameter the distance of its farthest member to a_i.
namespace eeht::postprocess {

enum class Method { DiagTopR, MaxPoint, CentroidMrsa };

const char* to_string(Method m);

struct Cluster {
  std::size_t anchor = 0;
  IndexSet members;  // anchor first, then by distance
  double diameter = 0.0;
  double score = 0.0;
};

/// Minimum-diameter cluster among all prefixes with score > r/(r+1); ties go
/// to the smaller anchor. Throws DomainError if no prefix clears the
/// threshold or p has the wrong length or a negative entry.
Cluster min_diam_cluster(const DenseMatrix& a, const Vector& p, std::size_t r);

struct ClusterSelection {
  IndexSet chosen;                 // r distinct indices
  std::vector<IndexSet> clusters;  // clusters[k] contains chosen[k]
  Method method = Method::DiagTopR;
};

/// DiagTopR returns the r largest diagonal entries (ties by index) as
/// singleton clusters. MaxPoint and CentroidMrsa repeatedly take the
/// minimum-diameter cluster, pick one member, and zero the point list on
/// every cluster found so far, until r indices are chosen.
ClusterSelection select(const DenseMatrix& a, const Vector& diag_x, std::size_t r, Method method);

struct ExtractionResult {
  IndexSet indices;
  double objective = 0.0;  // ‖A′ − A′X‖₁ on the matrix RCE ran on
  Vector diag;             // diag(X)
  ClusterSelection selection;
  rce::RceTrace trace;
  double seconds_reduce = 0.0;
  double seconds_rce = 0.0;
  double seconds_select = 0.0;
};

/// Truncated SVD to A′ = Σ_r V_rᵀ (skipped when `reduce` is false), RCE on
/// A′, then selection on diag(X) with distances taken in A′.
ExtractionResult eeht_extract(const DenseMatrix& a, const rce::RceConfig& cfg, Method method,
                              bool reduce = true);

}  // namespace eeht::postprocess
