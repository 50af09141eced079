#include "riskcal/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "riskcal/simplex.hpp"

namespace riskcal {

ConditionalUtility::ConditionalUtility(CoherentUtility base, OutcomeSpace space, Filtration filtration)
    : base_(std::move(base)), space_(std::move(space)), filtration_(std::move(filtration)) {
    if (base_.product())
        throw std::invalid_argument("conditional utilities need a distortion or scenario base");
    if (const auto* s = base_.scenarios()) s->validate(space_.size());
    filtration_.f1.block_index(space_.size());
}

RandomVariable evaluate_given(const CoherentUtility& base, const RandomVariable& x,
                              const Partition& given, const OutcomeSpace& space,
                              std::vector<std::size_t>* fallback) {
    if (x.size() != space.size()) throw std::invalid_argument("random variable size mismatch");
    std::vector<double> out(x.size());
    std::vector<double> values;
    std::vector<Rational> masses;
    for (std::size_t b = 0; b < given.block_count(); ++b) {
        const auto& blk = given.block(b);
        double v = 0.0;
        if (const auto* d = base.distortion()) {
            values.clear();
            masses.clear();
            for (std::size_t i : blk) {
                values.push_back(x[i]);
                masses.push_back(space.mass(i));
            }
            v = choquet_eval(values, masses, *d);
        } else if (const auto* s = base.scenarios()) {
            bool any = false;
            for (const auto& q : s->measures) {
                double qa = 0.0;
                double num = 0.0;
                for (std::size_t i : blk) {
                    qa += q[i];
                    num += q[i] * x[i];
                }
                if (qa <= 0.0) continue;
                const double e = num / qa;
                if (!any || e < v) v = e;
                any = true;
            }
            if (!any) {
                double num = 0.0;
                double den = 0.0;
                for (std::size_t i : blk) {
                    num += space.mass_double(i) * x[i];
                    den += space.mass_double(i);
                }
                v = num / den;
                if (fallback) fallback->push_back(b);
            }
        } else {
            throw std::invalid_argument("blockwise evaluation needs a distortion or scenario base");
        }
        for (std::size_t i : blk) out[i] = v;
    }
    return RandomVariable(std::move(out));
}

RandomVariable conditional_eval(const ConditionalUtility& cu, const RandomVariable& x) {
    return evaluate_given(cu.base(), x, cu.filtration().f1, cu.space());
}

std::vector<std::size_t> fallback_blocks(const ConditionalUtility& cu) {
    std::vector<std::size_t> fb;
    evaluate_given(cu.base(), RandomVariable::constant(cu.space().size(), 0.0), cu.filtration().f1,
                   cu.space(), &fb);
    return fb;
}

double unconditional_eval(const ConditionalUtility& cu, const RandomVariable& x) {
    return evaluate(cu.base(), x, cu.space());
}

double recompose(const ConditionalUtility& cu, const RandomVariable& x) {
    return evaluate(cu.base(), conditional_eval(cu, x), cu.space());
}

TimeConsistencyReport tc_gap(const ConditionalUtility& cu, std::span<const RandomVariable> probes) {
    if (probes.empty()) throw std::invalid_argument("tc_gap needs at least one probe");
    TimeConsistencyReport rep;
    rep.rows.reserve(probes.size());
    for (std::size_t id = 0; id < probes.size(); ++id) {
        GapRow row;
        row.id = id;
        row.u02 = unconditional_eval(cu, probes[id]);
        row.recomposed = recompose(cu, probes[id]);
        row.gap = std::abs(row.u02 - row.recomposed);
        if (id == 0 || row.gap > rep.max_gap) {
            rep.max_gap = row.gap;
            rep.witness_id = id;
        }
        rep.rows.push_back(row);
    }
    rep.witness = probes[rep.witness_id];
    return rep;
}

NotAcceptable::NotAcceptable(double value)
    : std::invalid_argument("not acceptable: u_{0,2}(x) = " + std::to_string(value) + " < 0") {}

ScenarioSet dual_vertices(const ConditionalUtility& cu, std::size_t cap) {
    if (const auto* d = cu.base().distortion()) return core_extreme_points(*d, cu.space(), cap);
    return *cu.base().scenarios();
}

ConeDecomposition cone_decompose(const ConditionalUtility& cu, const RandomVariable& x, double tol,
                                 std::size_t cap) {
    if (x.size() != cu.space().size()) throw std::invalid_argument("random variable size mismatch");
    const double u = unconditional_eval(cu, x);
    if (u < -tol) throw NotAcceptable(u);
    return cone_decompose(cu, x, dual_vertices(cu, cap), tol);
}

ConeDecomposition cone_decompose(const ConditionalUtility& cu, const RandomVariable& x,
                                 const ScenarioSet& vertices, double tol) {
    const auto& space = cu.space();
    const auto& f1 = cu.filtration().f1;
    const std::size_t n = space.size();
    if (x.size() != n) throw std::invalid_argument("random variable size mismatch");

    const double u = unconditional_eval(cu, x);
    if (u < -tol) throw NotAcceptable(u);

    // Unknowns: eta_b per F1 block. Superadditivity makes the per-block
    // constraints equivalent to the ones over all unions of blocks.
    const std::size_t nb = f1.block_count();
    lp::Matrix g;
    std::vector<double> h;
    for (const auto& q : vertices.measures) {
        std::vector<double> row(nb, 0.0);
        for (std::size_t b = 0; b < nb; ++b)
            for (std::size_t i : f1.block(b)) row[b] += q[i];
        g.push_back(row);
        h.push_back(0.0);
    }
    for (std::size_t b = 0; b < nb; ++b) {
        for (const auto& q : vertices.measures) {
            double qa = 0.0;
            double qx = 0.0;
            for (std::size_t i : f1.block(b)) {
                qa += q[i];
                qx += q[i] * x[i];
            }
            if (qa == 0.0) continue;
            std::vector<double> row(nb, 0.0);
            row[b] = -qa;
            g.push_back(std::move(row));
            h.push_back(-qx);
        }
    }

    ConeDecomposition out;
    out.dual_vertices = vertices.measures.size();
    const auto sol = lp::solve_inequalities(g, h, tol);
    if (!sol.feasible) {
        out.feasible = false;
        out.certificate_value = sol.certificate_value;
        return out;
    }

    std::vector<double> eta(n);
    for (std::size_t b = 0; b < nb; ++b)
        for (std::size_t i : f1.block(b)) eta[i] = sol.point[b];
    RandomVariable eta_rv(std::move(eta));
    RandomVariable zeta = x - eta_rv;
    out.feasible = true;
    out.u01_eta = unconditional_eval(cu, eta_rv);
    out.min_block_u02_zeta = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        RandomVariable restricted = RandomVariable::constant(n, 0.0);
        for (std::size_t i : f1.block(b)) restricted[i] = zeta[i];
        const double v = unconditional_eval(cu, restricted);
        if (b == 0 || v < out.min_block_u02_zeta) out.min_block_u02_zeta = v;
    }
    out.eta = std::move(eta_rv);
    out.zeta = std::move(zeta);
    return out;
}

AdditivityCheck conditional_commonotone_additivity_check(const ConditionalUtility& cu,
                                                         const RandomVariable& x,
                                                         const RandomVariable& y, double tol) {
    const auto cc = is_commonotone_pair(x, y, cu.space());
    if (!cc.commonotone)
        throw std::invalid_argument("inputs are not commonotone (outcomes " +
                                    std::to_string(cc.witness->first) + ", " +
                                    std::to_string(cc.witness->second) + ")");
    const auto sum = conditional_eval(cu, x + y);
    const auto ux = conditional_eval(cu, x);
    const auto uy = conditional_eval(cu, y);
    AdditivityCheck out;
    for (const auto& blk : cu.filtration().f1.blocks()) {
        const std::size_t i = blk.front();
        const double gap = sum[i] - ux[i] - uy[i];
        out.gap.push_back(gap);
        if (std::abs(gap) > tol) out.additive = false;
    }
    return out;
}

}  // namespace riskcal
