#pragma once

#include <limits>

#include "dwellcert/linalg.hpp"

namespace dwellcert {

enum class LpStatus {
  optimal,
  infeasible,
  below_threshold,  // a feasible point with objective <= stop_below was found
  unbounded,
};

struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = std::numeric_limits<double>::infinity();
};

/// min c'z  s.t.  A z = b, z >= 0, solved by a two-phase revised primal
/// simplex with a dense basis inverse. Deterministic: Dantzig pricing with
/// lowest-index tie-breaks, switching to Bland's rule after a degeneracy
/// stall. If stop_below > -inf, phase 2 returns early once a basic feasible
/// point with objective <= stop_below is reached (the reported objective is
/// then an upper bound on the minimum).
LpResult lp_min_equality(const Matrix& a, const Vector& b, const Vector& c,
                         double stop_below = -std::numeric_limits<double>::infinity(),
                         double tol = 1e-9);

}  // namespace dwellcert
