#pragma once

// Coherent monetary utility functions on a finite space: distortion (Choquet)
// utilities, finite scenario-set utilities, and the row-wise power-distortion
// product example.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riskcal/space.hpp"

namespace riskcal {

struct Expectation {};

/// psi(p) = max(0, (p - (1 - alpha)) / alpha): average of the worst alpha-tail.
struct ExpectedShortfall {
    Rational alpha;
};

/// psi(p) = p^(1 + alpha).
struct PowerDistortion {
    double alpha = 0.0;
};

/// Linear interpolation through (p, psi(p)) knots from (0,0) to (1,1).
struct PiecewiseDistortion {
    std::vector<std::pair<double, double>> knots;
};

/// Convex distortion psi: [0,1] -> [0,1] with psi(0)=0, psi(1)=1.
class DistortionFunction {
public:
    using Kind = std::variant<Expectation, ExpectedShortfall, PowerDistortion, PiecewiseDistortion>;

    /// Throws std::invalid_argument if the parameters do not define a convex distortion.
    explicit DistortionFunction(Kind kind);

    static DistortionFunction expectation() { return DistortionFunction(Expectation{}); }
    static DistortionFunction es(Rational alpha) { return DistortionFunction(ExpectedShortfall{alpha}); }
    static DistortionFunction power(double alpha) { return DistortionFunction(PowerDistortion{alpha}); }
    static DistortionFunction piecewise(std::vector<std::pair<double, double>> knots) {
        return DistortionFunction(PiecewiseDistortion{std::move(knots)});
    }

    double operator()(double p) const;
    /// Uses exact arithmetic where the kind allows it, then rounds once.
    double operator()(const Rational& p) const;
    /// Exact value for expectation and expected shortfall; nullopt otherwise.
    std::optional<Rational> exact(const Rational& p) const;

    const Kind& kind() const { return kind_; }
    bool is_expectation() const { return std::holds_alternative<Expectation>(kind_); }
    std::string name() const;

private:
    Kind kind_;
};

/// Finite set of probability vectors; u(x) = min over the set of E_Q[x].
struct ScenarioSet {
    std::vector<std::vector<double>> measures;

    /// Throws std::invalid_argument on empty sets, negative weights, wrong sizes,
    /// or weights not summing to 1 (within 1e-9).
    void validate(std::size_t n) const;
};

/// Row-wise power distortions p^(1 + alpha_r) on a rows x cols uniform grid,
/// averaged over rows with midpoint alpha_r = (r + 1/2) / rows.
struct ProductExample {
    std::size_t rows = 64;
    std::size_t cols = 64;
};

class CoherentUtility {
public:
    using Variant = std::variant<DistortionFunction, ScenarioSet, ProductExample>;

    CoherentUtility(DistortionFunction d) : v_(std::move(d)) {}
    CoherentUtility(ScenarioSet s) : v_(std::move(s)) {}
    CoherentUtility(ProductExample p) : v_(p) {}

    const Variant& variant() const { return v_; }
    const DistortionFunction* distortion() const { return std::get_if<DistortionFunction>(&v_); }
    const ScenarioSet* scenarios() const { return std::get_if<ScenarioSet>(&v_); }
    const ProductExample* product() const { return std::get_if<ProductExample>(&v_); }
    std::string name() const;

private:
    Variant v_;
};

/// Choquet integral of `values` against psi o P, where P has the given masses
/// (which need not be normalized; they are divided by their sum).
double choquet_eval(std::span<const double> values, std::span<const Rational> masses,
                    const DistortionFunction& psi);

double choquet_eval(const RandomVariable& x, const DistortionFunction& psi, const OutcomeSpace& space);

struct ScenarioMin {
    double value = 0.0;
    std::size_t index = 0;
};

ScenarioMin scenario_min_eval(const RandomVariable& x, const ScenarioSet& s);

inline constexpr std::size_t kCoreEnumerationCap = 8;

/// Marginal vectors of the convex game psi o P over all outcome orderings,
/// deduplicated, in lexicographic order of the first permutation producing each.
ScenarioSet core_extreme_points(const DistortionFunction& psi, const OutcomeSpace& space,
                                std::size_t cap = kCoreEnumerationCap);

/// Row-major grid space (outcome r * cols + c) with uniform masses and the row partition as F1.
std::pair<OutcomeSpace, Filtration> product_space(std::size_t rows, std::size_t cols);

/// Throws std::invalid_argument on negative entries or a size other than rows * cols.
double product_example_eval(const RandomVariable& x, const ProductExample& example);

/// Evaluates any variant. The product example ignores `space` masses beyond the size check.
double evaluate(const CoherentUtility& u, const RandomVariable& x, const OutcomeSpace& space);

struct CommonotoneCheck {
    bool commonotone = true;
    std::optional<std::pair<std::size_t, std::size_t>> witness;
};

/// (x(w) - x(w'))(y(w) - y(w')) >= 0 for all outcome pairs.
CommonotoneCheck is_commonotone_pair(const RandomVariable& x, const RandomVariable& y,
                                     const OutcomeSpace& space);

/// u(-1_A) < 0 for every nonempty A (exhaustive up to 20 outcomes, sampled above).
/// The product example is checked as u(1 - 1_A) - 1 since it is only defined for x >= 0.
bool relevance_check(const CoherentUtility& u, const OutcomeSpace& space,
                     std::uint64_t seed = 20181201);

}  // namespace riskcal
