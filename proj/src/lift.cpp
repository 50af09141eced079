#include "riskcal/lift.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcal {

Geometry geometry_xyl(GeometryPoint p, double m) {
    if (!(m > 0.0)) throw std::invalid_argument("geometry needs m > 0");
    if (!(p.x <= m && p.y >= -m)) throw std::invalid_argument("point lies outside W");
    Geometry g;
    if (p.x == m && p.y == -m) {
        g.lower = p;
        g.upper = p;
        g.lambda = 0.0;
        g.d = 0.0;
        return g;
    }
    g.lower = {p.x - p.y - m, -m};
    g.upper = {m, p.y + m - p.x};
    g.d = 2.0 * m + p.y - p.x;
    g.lambda = (p.y + m) / g.d;
    return g;
}

bool in_commonotone_corner(GeometryPoint p, double m) {
    return (p.y == -m && p.x <= m) || (p.x == m && p.y >= -m);
}

namespace {

const DistortionFunction& require_distortion(const ConditionalUtility& cu) {
    const auto* d = cu.base().distortion();
    if (!d) throw std::invalid_argument("non-distortion base: lifts need a distortion utility");
    return *d;
}

void require_grid(const ConditionalUtility& cu, const UniformGrid& grid) {
    if (grid.rank.size() != cu.space().size())
        throw std::invalid_argument("grid does not match the conditional utility's space");
}

}  // namespace

FoundSet find_b(const ConditionalUtility& cu, const UniformGrid& grid,
                const RandomVariable& lambda_target) {
    const auto& psi = require_distortion(cu);
    require_grid(cu, grid);
    const auto& f1 = cu.filtration().f1;
    const std::size_t n = grid.resolution;
    if (lambda_target.size() != cu.space().size())
        throw std::invalid_argument("lambda size mismatch");
    if (!is_measurable(lambda_target, f1, 1e-12))
        throw std::invalid_argument("lambda must be F1-measurable");

    std::vector<double> psi_grid(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        psi_grid[k] = psi(Rational(static_cast<long long>(k), static_cast<long long>(n)));

    FoundSet out;
    out.b = EventSet::empty(cu.space().size());
    std::vector<double> achieved(cu.space().size(), 0.0);
    for (const auto& blk : f1.blocks()) {
        const double target = lambda_target[blk.front()];
        if (target < -1e-12 || target > 1.0 + 1e-12)
            throw std::invalid_argument("lambda must lie in [0, 1]");
        std::size_t best = 0;
        for (std::size_t k = 1; k <= n; ++k)
            if (std::abs(psi_grid[k] - target) < std::abs(psi_grid[best] - target)) best = k;
        out.level.push_back(best);
        for (std::size_t i : blk) {
            out.b.set(i, grid.rank[i] <= best);
            achieved[i] = psi_grid[best];
        }
    }
    out.lambda_achieved = RandomVariable(std::move(achieved));
    return out;
}

LiftResult lift_pair(const ConditionalUtility& cu, const UniformGrid& grid, const RandomVariable& f,
                     const RandomVariable& g) {
    require_distortion(cu);
    require_grid(cu, grid);
    const auto& space = cu.space();
    const auto& f1 = cu.filtration().f1;
    const std::size_t n = space.size();
    if (f.size() != n || g.size() != n) throw std::invalid_argument("f, g size mismatch");
    if (!is_measurable(f, f1) || !is_measurable(g, f1))
        throw std::invalid_argument("f and g must be F1-measurable");

    LiftResult res;
    auto& pair = res.pair;
    pair.m = std::max(f.sup_norm(), g.sup_norm());
    res.diagnostics.resolution_used = grid.resolution;
    const std::size_t nb = f1.block_count();

    if (pair.m == 0.0) {
        pair.xi = RandomVariable::constant(n, 0.0);
        pair.eta = RandomVariable::constant(n, 0.0);
        pair.b = EventSet::empty(n);
        pair.lambda_target = RandomVariable::constant(n, 0.0);
        pair.lambda_achieved = RandomVariable::constant(n, 0.0);
        res.diagnostics.err_f.assign(nb, 0.0);
        res.diagnostics.err_g.assign(nb, 0.0);
        res.diagnostics.err_sum.assign(nb, 0.0);
        res.geometry.assign(nb, Geometry{});
        res.level.assign(nb, 0);
        return res;
    }

    std::vector<double> lambda(n);
    for (const auto& blk : f1.blocks()) {
        const std::size_t i0 = blk.front();
        const Geometry geo = geometry_xyl({f[i0], g[i0]}, pair.m);
        res.geometry.push_back(geo);
        for (std::size_t i : blk) lambda[i] = geo.lambda;
    }
    pair.lambda_target = RandomVariable(std::move(lambda));

    auto found = find_b(cu, grid, pair.lambda_target);
    pair.b = std::move(found.b);
    pair.lambda_achieved = std::move(found.lambda_achieved);
    res.level = std::move(found.level);

    std::vector<double> xi(n);
    std::vector<double> eta(n);
    for (std::size_t b = 0; b < nb; ++b) {
        const auto& geo = res.geometry[b];
        for (std::size_t i : f1.block(b)) {
            const GeometryPoint& v = pair.b.contains(i) ? geo.upper : geo.lower;
            xi[i] = v.x;
            eta[i] = v.y;
        }
    }
    pair.xi = RandomVariable(std::move(xi));
    pair.eta = RandomVariable(std::move(eta));

    const auto u_xi = conditional_eval(cu, pair.xi);
    const auto u_eta = conditional_eval(cu, pair.eta);
    const auto u_sum = conditional_eval(cu, pair.xi + pair.eta);
    auto& diag = res.diagnostics;
    for (const auto& blk : f1.blocks()) {
        const std::size_t i = blk.front();
        diag.err_f.push_back(std::abs(u_xi[i] - f[i]));
        diag.err_g.push_back(std::abs(u_eta[i] - g[i]));
        diag.err_sum.push_back(std::abs(u_sum[i] - (f[i] + g[i])));
        diag.snap_error =
            std::max(diag.snap_error, std::abs(pair.lambda_target[i] - pair.lambda_achieved[i]));
    }
    return res;
}

AdditivityProbe additivity_probe(const ConditionalUtility& cu, const UniformGrid& grid,
                                 const RandomVariable& f, const RandomVariable& g) {
    AdditivityProbe out;
    out.lift = lift_pair(cu, grid, f, g);
    out.u01_f = unconditional_eval(cu, f);
    out.u01_g = unconditional_eval(cu, g);
    out.u01_fg = unconditional_eval(cu, f + g);
    out.a_direct = out.u01_fg - out.u01_f - out.u01_g;

    const auto& p = out.lift.pair;
    out.u_xi = recompose(cu, p.xi);
    out.u_eta = recompose(cu, p.eta);
    out.u_sum = recompose(cu, p.xi + p.eta);
    out.a_lift = out.u_sum - out.u_xi - out.u_eta;
    out.commonotone = is_commonotone_pair(p.xi, p.eta, cu.space()).commonotone;
    return out;
}

}  // namespace riskcal
