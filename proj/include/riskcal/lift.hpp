#pragma once

// Commonotone lifts: given F1-measurable f, g, build commonotone F2 payoffs
// (xi, eta) with u_{1,2}(xi) = f, u_{1,2}(eta) = g and u_{1,2}(xi + eta) = f + g,
// up to the resolution of the uniform grid.

#include <cstddef>
#include <vector>

#include "riskcal/conditional.hpp"
#include "riskcal/space.hpp"

namespace riskcal {

struct GeometryPoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const GeometryPoint&, const GeometryPoint&) = default;
};

/// p = lower + lambda * (upper - lower), with `lower` on {(x, -m) : x <= m} and
/// `upper` on {(m, y) : y >= -m}; both coordinates of upper - lower equal `d`.
struct Geometry {
    GeometryPoint lower;
    GeometryPoint upper;
    double lambda = 0.0;
    double d = 0.0;
};

/// Throws std::invalid_argument unless m > 0 and p.x <= m, p.y >= -m.
/// At the corner (m, -m) both points equal p and lambda = 0.
Geometry geometry_xyl(GeometryPoint p, double m);

/// Membership in {(x, -m) : x <= m} U {(m, y) : y >= -m}, compared exactly.
bool in_commonotone_corner(GeometryPoint p, double m);

struct CommonotonePair {
    RandomVariable xi;
    RandomVariable eta;
    EventSet b;
    RandomVariable lambda_target;
    RandomVariable lambda_achieved;
    double m = 0.0;
};

struct LiftDiagnostics {
    /// Per F1 block: |u12(xi) - f|, |u12(eta) - g|, |u12(xi + eta) - (f + g)|.
    std::vector<double> err_f;
    std::vector<double> err_g;
    std::vector<double> err_sum;
    double snap_error = 0.0;
    std::size_t resolution_used = 0;
};

struct LiftResult {
    CommonotonePair pair;
    LiftDiagnostics diagnostics;
    /// Per F1 block.
    std::vector<Geometry> geometry;
    std::vector<std::size_t> level;
};

struct FoundSet {
    EventSet b;
    RandomVariable lambda_achieved;
    /// Grid level k per F1 block; B has conditional mass k/n there.
    std::vector<std::size_t> level;
};

/// Per block, picks the grid level k minimizing |psi(k/n) - lambda_target|
/// (ties to the smaller k) and returns B = {U <= k/n} on that block.
/// Requires a distortion base.
FoundSet find_b(const ConditionalUtility& cu, const UniformGrid& grid,
                const RandomVariable& lambda_target);

LiftResult lift_pair(const ConditionalUtility& cu, const UniformGrid& grid, const RandomVariable& f,
                     const RandomVariable& g);

struct AdditivityProbe {
    double u01_f = 0.0;
    double u01_g = 0.0;
    double u01_fg = 0.0;
    /// u01(f + g) - u01(f) - u01(g).
    double a_direct = 0.0;
    /// Recomposed utilities of the lift: u01(u12(.)) at xi, eta, xi + eta.
    double u_xi = 0.0;
    double u_eta = 0.0;
    double u_sum = 0.0;
    /// u_sum - u_xi - u_eta; equals a_direct when snap_error is zero.
    double a_lift = 0.0;
    bool commonotone = false;
    LiftResult lift;
};

AdditivityProbe additivity_probe(const ConditionalUtility& cu, const UniformGrid& grid,
                                 const RandomVariable& f, const RandomVariable& g);

}  // namespace riskcal
