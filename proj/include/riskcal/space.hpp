#pragma once

// Finite filtered probability spaces with exact rational masses.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace riskcal {

using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& q);
double to_double(const Rational& q);

/// Real-valued payoff, one entry per outcome.
class RandomVariable {
public:
    RandomVariable() = default;
    explicit RandomVariable(std::vector<double> values) : values_(std::move(values)) {}
    RandomVariable(std::initializer_list<double> values) : values_(values) {}

    static RandomVariable constant(std::size_t n, double c) {
        return RandomVariable(std::vector<double>(n, c));
    }

    std::size_t size() const { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const { return values_; }
    std::span<const double> view() const { return values_; }

    bool is_finite() const;
    double sup_norm() const;

    RandomVariable& operator+=(const RandomVariable& o);
    RandomVariable& operator-=(const RandomVariable& o);
    RandomVariable& operator+=(double c);
    RandomVariable& operator*=(double c);

    friend RandomVariable operator+(RandomVariable a, const RandomVariable& b) { return a += b; }
    friend RandomVariable operator-(RandomVariable a, const RandomVariable& b) { return a -= b; }
    friend RandomVariable operator+(RandomVariable a, double c) { return a += c; }
    friend RandomVariable operator-(RandomVariable a, double c) { return a += -c; }
    friend RandomVariable operator*(double c, RandomVariable a) { return a *= c; }
    friend bool operator==(const RandomVariable&, const RandomVariable&) = default;

private:
    std::vector<double> values_;
};

/// Pointwise product with another variable (e.g. restriction by an indicator).
RandomVariable hadamard(const RandomVariable& a, const RandomVariable& b);

class EventSet {
public:
    EventSet() = default;
    explicit EventSet(std::vector<bool> member) : member_(std::move(member)) {}
    static EventSet empty(std::size_t n) { return EventSet(std::vector<bool>(n, false)); }
    static EventSet full(std::size_t n) { return EventSet(std::vector<bool>(n, true)); }
    static EventSet of(std::size_t n, std::span<const std::size_t> indices);

    std::size_t size() const { return member_.size(); }
    bool contains(std::size_t i) const { return member_[i]; }
    void set(std::size_t i, bool v) { member_[i] = v; }
    std::vector<std::size_t> indices() const;
    bool subset_of(const EventSet& other) const;
    RandomVariable indicator() const;

    friend bool operator==(const EventSet&, const EventSet&) = default;

private:
    std::vector<bool> member_;
};

class OutcomeSpace {
public:
    OutcomeSpace() = default;
    /// No validation here; see validate().
    OutcomeSpace(std::vector<std::string> labels, std::vector<Rational> masses);
    explicit OutcomeSpace(std::vector<Rational> masses);

    static OutcomeSpace uniform(std::size_t n);

    std::size_t size() const { return masses_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const Rational& mass(std::size_t i) const { return masses_[i]; }
    const std::vector<Rational>& masses() const { return masses_; }
    double mass_double(std::size_t i) const { return masses_double_[i]; }
    const std::vector<double>& masses_double() const { return masses_double_; }

    Rational total_mass() const;
    Rational mass_of(const EventSet& a) const;
    Rational mass_of(std::span<const std::size_t> indices) const;
    /// Least common denominator of all masses.
    boost::multiprecision::cpp_int common_denominator() const;

    double expectation(const RandomVariable& x) const;

private:
    std::vector<std::string> labels_;
    std::vector<Rational> masses_;
    std::vector<double> masses_double_;
};

class Partition {
public:
    using Block = std::vector<std::size_t>;

    Partition() = default;
    explicit Partition(std::vector<Block> blocks);

    static Partition trivial(std::size_t n);
    static Partition singletons(std::size_t n);
    /// Groups outcomes by equal label value (labels need not be contiguous).
    static Partition from_labels(std::span<const std::size_t> labels);

    std::size_t block_count() const { return blocks_.size(); }
    const Block& block(std::size_t b) const { return blocks_[b]; }
    const std::vector<Block>& blocks() const { return blocks_; }

    /// Block index per outcome; throws if the partition does not cover [0, n).
    std::vector<std::size_t> block_index(std::size_t n) const;

    /// Every block of `this` lies inside a block of `coarser`.
    bool refines(const Partition& coarser, std::size_t n) const;

private:
    std::vector<Block> blocks_;
};

struct Filtration {
    Partition f0;
    Partition f1;
    Partition f2;

    /// Trivial F0, the given F1, singleton F2.
    static Filtration two_period(std::size_t n, Partition f1);
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> violations;
    Rational mass_sum;
    boost::multiprecision::cpp_int common_denominator;
};

ValidationReport validate(const OutcomeSpace& space, const Filtration& filtration);

/// Constant on each block of `given` (within `tol`, default exact).
bool is_measurable(const RandomVariable& x, const Partition& given, double tol = 0.0);

RandomVariable conditional_expectation(const RandomVariable& x, const Partition& given,
                                       const OutcomeSpace& space);

/// Exact E[1_B | given], one value per block.
std::vector<Rational> conditional_mass(const EventSet& b, const Partition& given,
                                       const OutcomeSpace& space);

/// Splits `block` into `n` groups of equal mass. Outcomes are placed in canonical
/// order into the first group with room; backtracks when that dead-ends.
/// Returns the group index of each block member, or nullopt if no split exists.
std::optional<std::vector<std::size_t>> equal_mass_split(const OutcomeSpace& space,
                                                         const Partition::Block& block,
                                                         std::size_t n);

/// Largest n >= 2 such that every F1 block splits into n equal-conditional-mass
/// groups; 0 when no such n exists.
std::size_t conditional_resolution(const OutcomeSpace& space, const Filtration& filtration);

struct UniformGrid {
    std::size_t resolution = 1;
    /// Group rank per outcome, 1..n; U = rank / n.
    std::vector<std::size_t> rank;
    RandomVariable u_values;
    /// level_sets[k] = {U <= k/n} for k = 0..n.
    std::vector<EventSet> level_sets;

    /// Partition of the outcomes by value of U.
    Partition value_partition() const;
};

class ResolutionUnavailable : public std::runtime_error {
public:
    ResolutionUnavailable(std::size_t block, std::size_t n);
    std::size_t block() const { return block_; }

private:
    std::size_t block_;
};

UniformGrid build_uniform_grid(const OutcomeSpace& space, const Filtration& filtration,
                               std::size_t n);

struct ConditionalMassSet {
    EventSet set;
    /// Grid level used per F1 block (h snapped down to k/n).
    std::vector<std::size_t> level;
    std::vector<Rational> achieved;
    bool snapped = false;
};

ConditionalMassSet set_with_conditional_mass(const OutcomeSpace& space,
                                             const Filtration& filtration,
                                             const UniformGrid& grid, const RandomVariable& h);

struct IndependenceResult {
    bool independent = true;
    Rational max_deviation;
};

IndependenceResult independence_check(const Partition& a, const Partition& b,
                                      const OutcomeSpace& space);

}  // namespace riskcal
