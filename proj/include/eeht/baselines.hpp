#pragma once

#include "eeht/linalg.hpp"

#include <vector>

namespace eeht::baselines {

/// Successive projection: at each step picks the column of the current
/// residual with the largest L2 norm (lowest index on ties), then projects
/// every column onto the orthogonal complement of that residual column.
///
/// If `residual_norms` is non-null it receives the norm of each picked
/// residual column. Throws DomainError unless 1 ≤ r ≤ min(d, n), and
/// NumericalError when the residual vanishes before r picks.
IndexSet spa(const DenseMatrix& a, std::size_t r, std::vector<double>* residual_norms = nullptr);

}  // namespace eeht::baselines
