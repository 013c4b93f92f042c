#pragma once

#include "nid/linalg.hpp"

#include <vector>

namespace nid {

struct LpResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    double value = 0.0;
    std::vector<double> x;
};

/// Dense two-phase simplex for  min c.x  subject to  A x = b, x >= 0.
/// Dantzig pricing, switching to Bland's rule after a run of degenerate
/// pivots so that the method terminates.
LpResult simplex_minimize(const Matrix<double>& a, const std::vector<double>& b, const std::vector<double>& c,
                          double eps = 1e-11);

} // namespace nid
