#pragma once

// Conditional utilities u_{1,2}, the recomposition u_{0,1} o u_{1,2}, and
// time-consistency audits on a two-period filtration.

#include <optional>
#include <span>
#include <vector>

#include "riskcal/space.hpp"
#include "riskcal/utility.hpp"

namespace riskcal {

/// A coherent utility on F2 together with the filtration it is conditioned on.
/// Only distortion and scenario bases are accepted.
class ConditionalUtility {
public:
    ConditionalUtility(CoherentUtility base, OutcomeSpace space, Filtration filtration);

    const CoherentUtility& base() const { return base_; }
    const OutcomeSpace& space() const { return space_; }
    const Filtration& filtration() const { return filtration_; }

private:
    CoherentUtility base_;
    OutcomeSpace space_;
    Filtration filtration_;
};

/// Blockwise evaluation of `base` under the conditional law on each block of `given`.
/// Scenario measures vanishing on a block are skipped there; when all vanish the
/// block falls back to the conditional expectation under P and is listed in
/// `fallback` (if provided).
RandomVariable evaluate_given(const CoherentUtility& base, const RandomVariable& x,
                              const Partition& given, const OutcomeSpace& space,
                              std::vector<std::size_t>* fallback = nullptr);

/// u_{1,2}(x): F1-measurable.
RandomVariable conditional_eval(const ConditionalUtility& cu, const RandomVariable& x);

/// F1 blocks on which scenario conditioning fell back to P.
std::vector<std::size_t> fallback_blocks(const ConditionalUtility& cu);

/// u_{0,2}(x).
double unconditional_eval(const ConditionalUtility& cu, const RandomVariable& x);

/// u_{0,1}(u_{1,2}(x)).
double recompose(const ConditionalUtility& cu, const RandomVariable& x);

struct GapRow {
    std::size_t id = 0;
    double u02 = 0.0;
    double recomposed = 0.0;
    double gap = 0.0;
};

struct ConeVerdict {
    std::size_t id = 0;
    bool feasible = false;
};

struct TimeConsistencyReport {
    double max_gap = 0.0;
    std::size_t witness_id = 0;
    RandomVariable witness;
    std::vector<GapRow> rows;
    std::vector<ConeVerdict> cone_verdicts;
};

/// Per-probe |u_{0,2}(x) - u_{0,1}(u_{1,2}(x))|; the witness is the first probe
/// attaining the maximum. Throws std::invalid_argument on an empty probe list.
TimeConsistencyReport tc_gap(const ConditionalUtility& cu, std::span<const RandomVariable> probes);

class NotAcceptable : public std::invalid_argument {
public:
    explicit NotAcceptable(double value);
};

struct ConeDecomposition {
    bool feasible = false;
    /// x = eta + zeta with eta F1-measurable; present when feasible.
    std::optional<RandomVariable> eta;
    std::optional<RandomVariable> zeta;
    /// Re-verified constraint values for the witness.
    double u01_eta = 0.0;
    double min_block_u02_zeta = 0.0;
    /// Positive value of the Farkas certificate when infeasible.
    double certificate_value = 0.0;
    std::size_t dual_vertices = 0;
};

/// Decides whether x lies in A_{0,1} + A_{1,2}: x = eta + zeta, eta F1-measurable
/// with u_{0,2}(eta) >= 0 and u_{0,2}(zeta 1_A) >= 0 for every F1 block A.
/// Throws NotAcceptable when u_{0,2}(x) < -tol and std::invalid_argument
/// ("space too large") when the dual vertex enumeration exceeds `cap` outcomes.
ConeDecomposition cone_decompose(const ConditionalUtility& cu, const RandomVariable& x,
                                 double tol = 1e-9, std::size_t cap = kCoreEnumerationCap);

/// Dual vertices of the base: core extreme points for a distortion, the listed
/// measures for a scenario set.
ScenarioSet dual_vertices(const ConditionalUtility& cu, std::size_t cap = kCoreEnumerationCap);

/// Same as above with precomputed dual vertices (for auditing many probes).
ConeDecomposition cone_decompose(const ConditionalUtility& cu, const RandomVariable& x,
                                 const ScenarioSet& vertices, double tol = 1e-9);

struct AdditivityCheck {
    bool additive = true;
    /// u_{1,2}(x+y) - u_{1,2}(x) - u_{1,2}(y), one entry per F1 block.
    std::vector<double> gap;
};

/// Throws std::invalid_argument if (x, y) is not commonotone.
AdditivityCheck conditional_commonotone_additivity_check(const ConditionalUtility& cu,
                                                         const RandomVariable& x,
                                                         const RandomVariable& y,
                                                         double tol = 1e-9);

}  // namespace riskcal
