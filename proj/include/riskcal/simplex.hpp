#pragma once

// Dense two-phase simplex for desk-scale linear programs (Bland's rule, so it
// terminates on degenerate problems).

#include <cstddef>
#include <vector>

namespace riskcal::lp {

using Matrix = std::vector<std::vector<double>>;

enum class Status { optimal, infeasible, unbounded };

struct Result {
    Status status = Status::infeasible;
    std::vector<double> z;
    double objective = 0.0;
};

/// minimize c.z subject to A z = b, z >= 0.
Result solve_standard_form(const Matrix& a, const std::vector<double>& b,
                           const std::vector<double>& c, double tol = 1e-10);

struct Feasibility {
    bool feasible = false;
    /// A point with G y >= h when feasible.
    std::vector<double> point;
    /// Farkas multipliers w >= 0, sum 1, with G^T w = 0 and h.w > 0 when infeasible.
    std::vector<double> certificate;
    double certificate_value = 0.0;
};

/// Decides whether G y >= h has a solution in free variables y. Infeasibility is
/// established independently by maximizing h.w over {w >= 0, G^T w = 0, sum w = 1}.
Feasibility solve_inequalities(const Matrix& g, const std::vector<double>& h, double tol = 1e-9);

}  // namespace riskcal::lp
