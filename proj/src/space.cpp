#include "riskcal/space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace riskcal {

using boost::multiprecision::cpp_int;

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

double to_double(const Rational& q) { return q.convert_to<double>(); }

// ---------------------------------------------------------------------------
// RandomVariable / EventSet

bool RandomVariable::is_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double RandomVariable::sup_norm() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

RandomVariable& RandomVariable::operator+=(const RandomVariable& o) {
    if (o.size() != size()) throw std::invalid_argument("random variable size mismatch");
    for (std::size_t i = 0; i < size(); ++i) values_[i] += o.values_[i];
    return *this;
}

RandomVariable& RandomVariable::operator-=(const RandomVariable& o) {
    if (o.size() != size()) throw std::invalid_argument("random variable size mismatch");
    for (std::size_t i = 0; i < size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

RandomVariable& RandomVariable::operator+=(double c) {
    for (double& v : values_) v += c;
    return *this;
}

RandomVariable& RandomVariable::operator*=(double c) {
    for (double& v : values_) v *= c;
    return *this;
}

RandomVariable hadamard(const RandomVariable& a, const RandomVariable& b) {
    if (a.size() != b.size()) throw std::invalid_argument("random variable size mismatch");
    std::vector<double> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
    return RandomVariable(std::move(out));
}

EventSet EventSet::of(std::size_t n, std::span<const std::size_t> indices) {
    EventSet e = empty(n);
    for (std::size_t i : indices) {
        if (i >= n) throw std::out_of_range("event index out of range");
        e.member_[i] = true;
    }
    return e;
}

std::vector<std::size_t> EventSet::indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < member_.size(); ++i)
        if (member_[i]) out.push_back(i);
    return out;
}

bool EventSet::subset_of(const EventSet& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
        if (member_[i] && !other.member_[i]) return false;
    return true;
}

RandomVariable EventSet::indicator() const {
    std::vector<double> v(size());
    for (std::size_t i = 0; i < size(); ++i) v[i] = member_[i] ? 1.0 : 0.0;
    return RandomVariable(std::move(v));
}

// ---------------------------------------------------------------------------
// OutcomeSpace

OutcomeSpace::OutcomeSpace(std::vector<std::string> labels, std::vector<Rational> masses)
    : labels_(std::move(labels)), masses_(std::move(masses)) {
    if (labels_.size() != masses_.size())
        throw std::invalid_argument("label count does not match mass count");
    masses_double_.reserve(masses_.size());
    for (const auto& m : masses_) masses_double_.push_back(to_double(m));
}

OutcomeSpace::OutcomeSpace(std::vector<Rational> masses)
    : OutcomeSpace(
          [&] {
              std::vector<std::string> l;
              for (std::size_t i = 0; i < masses.size(); ++i) l.push_back("w" + std::to_string(i));
              return l;
          }(),
          masses) {}

OutcomeSpace OutcomeSpace::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("uniform space needs at least one outcome");
    return OutcomeSpace(std::vector<Rational>(n, Rational(1, static_cast<long long>(n))));
}

Rational OutcomeSpace::total_mass() const {
    Rational s = 0;
    for (const auto& m : masses_) s += m;
    return s;
}

Rational OutcomeSpace::mass_of(const EventSet& a) const {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.contains(i)) s += masses_[i];
    return s;
}

Rational OutcomeSpace::mass_of(std::span<const std::size_t> indices) const {
    Rational s = 0;
    for (std::size_t i : indices) s += masses_[i];
    return s;
}

cpp_int OutcomeSpace::common_denominator() const {
    cpp_int d = 1;
    for (const auto& m : masses_) d = boost::multiprecision::lcm(d, denominator(m));
    return d;
}

double OutcomeSpace::expectation(const RandomVariable& x) const {
    if (x.size() != size()) throw std::invalid_argument("random variable size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < size(); ++i) s += masses_double_[i] * x[i];
    return s;
}

// ---------------------------------------------------------------------------
// Partition / Filtration

Partition::Partition(std::vector<Block> blocks) : blocks_(std::move(blocks)) {}

Partition Partition::trivial(std::size_t n) {
    Block b(n);
    std::iota(b.begin(), b.end(), std::size_t{0});
    return Partition({std::move(b)});
}

Partition Partition::singletons(std::size_t n) {
    std::vector<Block> blocks;
    blocks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) blocks.push_back({i});
    return Partition(std::move(blocks));
}

Partition Partition::from_labels(std::span<const std::size_t> labels) {
    std::map<std::size_t, Block> grouped;
    for (std::size_t i = 0; i < labels.size(); ++i) grouped[labels[i]].push_back(i);
    std::vector<Block> blocks;
    for (auto& [_, b] : grouped) blocks.push_back(std::move(b));
    return Partition(std::move(blocks));
}

std::vector<std::size_t> Partition::block_index(std::size_t n) const {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> idx(n, unset);
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        for (std::size_t i : blocks_[b]) {
            if (i >= n) throw std::invalid_argument("partition index out of range");
            if (idx[i] != unset) throw std::invalid_argument("partition blocks overlap");
            idx[i] = b;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (idx[i] == unset) throw std::invalid_argument("partition does not cover the space");
    return idx;
}

bool Partition::refines(const Partition& coarser, std::size_t n) const {
    const auto outer = coarser.block_index(n);
    for (const auto& b : blocks_) {
        for (std::size_t i : b)
            if (outer[i] != outer[b.front()]) return false;
    }
    return true;
}

Filtration Filtration::two_period(std::size_t n, Partition f1) {
    return Filtration{Partition::trivial(n), std::move(f1), Partition::singletons(n)};
}

// ---------------------------------------------------------------------------
// validate

namespace {

// Structural check of one partition; appends violations, returns false on failure.
bool check_partition(const Partition& p, std::size_t n, const std::string& name,
                     std::vector<std::string>& out) {
    std::vector<int> seen(n, -1);
    bool ok = true;
    for (std::size_t b = 0; b < p.block_count(); ++b) {
        if (p.block(b).empty()) {
            out.push_back(name + " block " + std::to_string(b) + " is empty");
            ok = false;
        }
        for (std::size_t i : p.block(b)) {
            if (i >= n) {
                out.push_back(name + " block " + std::to_string(b) + " references outcome " +
                              std::to_string(i) + " outside [0, " + std::to_string(n) + ")");
                ok = false;
                continue;
            }
            if (seen[i] >= 0) {
                out.push_back(name + " outcome " + std::to_string(i) + " appears in blocks " +
                              std::to_string(seen[i]) + " and " + std::to_string(b));
                ok = false;
            }
            seen[i] = static_cast<int>(b);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (seen[i] < 0) {
            out.push_back(name + " does not cover outcome " + std::to_string(i));
            ok = false;
        }
    }
    return ok;
}

}  // namespace

ValidationReport validate(const OutcomeSpace& space, const Filtration& filtration) {
    ValidationReport r;
    const std::size_t n = space.size();
    if (n == 0) r.violations.push_back("space has no outcomes");

    for (std::size_t i = 0; i < n; ++i) {
        if (space.mass(i) <= 0)
            r.violations.push_back("outcome " + std::to_string(i) + " has non-positive mass " +
                                   to_string(space.mass(i)));
    }
    r.mass_sum = space.total_mass();
    r.common_denominator = space.common_denominator();
    if (r.mass_sum != 1) {
        const Rational scaled = r.mass_sum * Rational(r.common_denominator);
        r.violations.push_back("mass sum " + to_string(r.mass_sum) + " != 1 (" +
                               to_string(scaled) + "/" + r.common_denominator.str() +
                               " over common denominator " + r.common_denominator.str() + ")");
    }

    const bool f0_ok = check_partition(filtration.f0, n, "F0", r.violations);
    const bool f1_ok = check_partition(filtration.f1, n, "F1", r.violations);
    const bool f2_ok = check_partition(filtration.f2, n, "F2", r.violations);

    if (f0_ok && filtration.f0.block_count() != 1)
        r.violations.push_back("F0 must have exactly one block, found " +
                               std::to_string(filtration.f0.block_count()));
    if (f2_ok) {
        for (std::size_t b = 0; b < filtration.f2.block_count(); ++b) {
            if (filtration.f2.block(b).size() != 1) {
                r.violations.push_back("F2 block " + std::to_string(b) + " is not a singleton");
            }
        }
    }
    if (f0_ok && f1_ok && !filtration.f1.refines(filtration.f0, n))
        r.violations.push_back("F1 does not refine F0");
    if (f1_ok && f2_ok && !filtration.f2.refines(filtration.f1, n)) {
        const auto outer = filtration.f1.block_index(n);
        for (std::size_t b = 0; b < filtration.f2.block_count(); ++b) {
            const auto& blk = filtration.f2.block(b);
            for (std::size_t i : blk) {
                if (outer[i] != outer[blk.front()]) {
                    r.violations.push_back("F2 block " + std::to_string(b) +
                                           " straddles F1 blocks " +
                                           std::to_string(outer[blk.front()]) + " and " +
                                           std::to_string(outer[i]));
                    break;
                }
            }
        }
    }
    r.ok = r.violations.empty();
    return r;
}

// ---------------------------------------------------------------------------
// Conditional expectation

bool is_measurable(const RandomVariable& x, const Partition& given, double tol) {
    for (const auto& b : given.blocks()) {
        if (b.empty()) continue;
        const double ref = x[b.front()];
        for (std::size_t i : b)
            if (std::abs(x[i] - ref) > tol) return false;
    }
    return true;
}

RandomVariable conditional_expectation(const RandomVariable& x, const Partition& given,
                                       const OutcomeSpace& space) {
    if (x.size() != space.size()) throw std::invalid_argument("random variable size mismatch");
    std::vector<double> out(x.size());
    for (const auto& b : given.blocks()) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t i : b) {
            num += space.mass_double(i) * x[i];
            den += space.mass_double(i);
        }
        const double v = num / den;
        for (std::size_t i : b) out[i] = v;
    }
    return RandomVariable(std::move(out));
}

std::vector<Rational> conditional_mass(const EventSet& b, const Partition& given,
                                       const OutcomeSpace& space) {
    std::vector<Rational> out;
    out.reserve(given.block_count());
    for (const auto& blk : given.blocks()) {
        Rational num = 0;
        Rational den = 0;
        for (std::size_t i : blk) {
            den += space.mass(i);
            if (b.contains(i)) num += space.mass(i);
        }
        out.push_back(num / den);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Equal-mass splitting

std::optional<std::vector<std::size_t>> equal_mass_split(const OutcomeSpace& space,
                                                         const Partition::Block& block,
                                                         std::size_t n) {
    if (n == 0) throw std::invalid_argument("split count must be positive");
    if (block.empty()) return std::nullopt;
    if (n == 1) return std::vector<std::size_t>(block.size(), 0);
    if (n > block.size()) return std::nullopt;

    // Integer weights over the block's common denominator.
    cpp_int den = 1;
    for (std::size_t i : block) den = boost::multiprecision::lcm(den, denominator(space.mass(i)));
    std::vector<cpp_int> w;
    w.reserve(block.size());
    cpp_int total = 0;
    for (std::size_t i : block) {
        const Rational scaled = space.mass(i) * Rational(den);
        w.push_back(numerator(scaled));
        total += w.back();
    }
    if (total % n != 0) return std::nullopt;
    const cpp_int target = total / n;
    for (const auto& wi : w)
        if (wi > target) return std::nullopt;

    std::vector<cpp_int> load(n, 0);
    std::vector<std::size_t> assign(block.size(), 0);
    constexpr std::size_t node_budget = 5'000'000;
    std::size_t nodes = 0;

    std::function<bool(std::size_t)> place = [&](std::size_t i) -> bool {
        if (i == block.size()) return true;
        if (++nodes > node_budget)
            throw std::runtime_error("equal-mass split search exceeded its node budget");
        for (std::size_t g = 0; g < n; ++g) {
            if (load[g] + w[i] > target) continue;
            // Groups with equal load are interchangeable for the remaining items.
            bool duplicate = false;
            for (std::size_t h = 0; h < g; ++h) {
                if (load[h] == load[g]) {
                    duplicate = true;
                    break;
                }
            }
            if (duplicate) continue;
            load[g] += w[i];
            assign[i] = g;
            if (place(i + 1)) return true;
            load[g] -= w[i];
        }
        return false;
    };
    if (!place(0)) return std::nullopt;
    return assign;
}

std::size_t conditional_resolution(const OutcomeSpace& space, const Filtration& filtration) {
    const auto& blocks = filtration.f1.blocks();
    if (blocks.empty()) return 0;
    std::size_t upper = blocks.front().size();
    for (const auto& b : blocks) upper = std::min(upper, b.size());
    for (std::size_t n = upper; n >= 2; --n) {
        bool all = true;
        for (const auto& b : blocks) {
            if (!equal_mass_split(space, b, n)) {
                all = false;
                break;
            }
        }
        if (all) return n;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// Uniform grid

ResolutionUnavailable::ResolutionUnavailable(std::size_t block, std::size_t n)
    : std::runtime_error("resolution unavailable: F1 block " + std::to_string(block) +
                         " cannot be split into " + std::to_string(n) +
                         " parts of equal conditional mass"),
      block_(block) {}

Partition UniformGrid::value_partition() const {
    return Partition::from_labels(rank);
}

UniformGrid build_uniform_grid(const OutcomeSpace& space, const Filtration& filtration,
                               std::size_t n) {
    if (n == 0) throw std::invalid_argument("grid resolution must be positive");
    UniformGrid grid;
    grid.resolution = n;
    grid.rank.assign(space.size(), 0);
    for (std::size_t b = 0; b < filtration.f1.block_count(); ++b) {
        const auto& blk = filtration.f1.block(b);
        const auto split = equal_mass_split(space, blk, n);
        if (!split) throw ResolutionUnavailable(b, n);
        for (std::size_t j = 0; j < blk.size(); ++j) grid.rank[blk[j]] = (*split)[j] + 1;
    }
    std::vector<double> u(space.size());
    for (std::size_t i = 0; i < space.size(); ++i)
        u[i] = static_cast<double>(grid.rank[i]) / static_cast<double>(n);
    grid.u_values = RandomVariable(std::move(u));
    grid.level_sets.reserve(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        EventSet e = EventSet::empty(space.size());
        for (std::size_t i = 0; i < space.size(); ++i) e.set(i, grid.rank[i] <= k);
        grid.level_sets.push_back(std::move(e));
    }
    return grid;
}

ConditionalMassSet set_with_conditional_mass(const OutcomeSpace& space,
                                             const Filtration& filtration,
                                             const UniformGrid& grid, const RandomVariable& h) {
    constexpr double tol = 1e-12;
    if (h.size() != space.size()) throw std::invalid_argument("h size mismatch");
    if (!is_measurable(h, filtration.f1, tol))
        throw std::invalid_argument("h must be F1-measurable");
    const std::size_t n = grid.resolution;

    ConditionalMassSet out;
    out.set = EventSet::empty(space.size());
    for (std::size_t b = 0; b < filtration.f1.block_count(); ++b) {
        const auto& blk = filtration.f1.block(b);
        const double hv = h[blk.front()];
        if (hv < -tol || hv > 1.0 + tol) throw std::invalid_argument("h must take values in [0,1]");
        const double scaled = std::clamp(hv, 0.0, 1.0) * static_cast<double>(n);
        const double nearest = std::round(scaled);
        std::size_t k = 0;
        if (std::abs(scaled - nearest) <= 1e-9) {
            k = static_cast<std::size_t>(nearest);
        } else {
            k = static_cast<std::size_t>(std::floor(scaled));
            out.snapped = true;
        }
        out.level.push_back(k);
        for (std::size_t i : blk) out.set.set(i, grid.rank[i] <= k);
    }
    out.achieved = conditional_mass(out.set, filtration.f1, space);
    return out;
}

IndependenceResult independence_check(const Partition& a, const Partition& b,
                                      const OutcomeSpace& space) {
    const std::size_t n = space.size();
    const auto ia = a.block_index(n);
    const auto ib = b.block_index(n);
    std::vector<Rational> pa(a.block_count(), 0);
    std::vector<Rational> pb(b.block_count(), 0);
    std::vector<std::vector<Rational>> joint(a.block_count(),
                                             std::vector<Rational>(b.block_count(), 0));
    for (std::size_t i = 0; i < n; ++i) {
        pa[ia[i]] += space.mass(i);
        pb[ib[i]] += space.mass(i);
        joint[ia[i]][ib[i]] += space.mass(i);
    }
    IndependenceResult r;
    r.max_deviation = 0;
    for (std::size_t x = 0; x < pa.size(); ++x) {
        for (std::size_t y = 0; y < pb.size(); ++y) {
            Rational dev = joint[x][y] - pa[x] * pb[y];
            if (dev < 0) dev = -dev;
            if (dev > r.max_deviation) r.max_deviation = dev;
        }
    }
    r.independent = (r.max_deviation == 0);
    return r;
}

}  // namespace riskcal
