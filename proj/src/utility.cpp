#include "riskcal/utility.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace riskcal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double piecewise_at(const PiecewiseDistortion& pw, double p) {
    const auto& k = pw.knots;
    if (p <= k.front().first) return k.front().second;
    if (p >= k.back().first) return k.back().second;
    auto hi = std::upper_bound(k.begin(), k.end(), p,
                               [](double v, const auto& knot) { return v < knot.first; });
    auto lo = std::prev(hi);
    const double t = (p - lo->first) / (hi->first - lo->first);
    return lo->second + t * (hi->second - lo->second);
}

}  // namespace

// ---------------------------------------------------------------------------
// DistortionFunction

DistortionFunction::DistortionFunction(Kind kind) : kind_(std::move(kind)) {
    std::visit(overloaded{
                   [](const Expectation&) {},
                   [](const ExpectedShortfall& es) {
                       if (es.alpha <= 0 || es.alpha > 1)
                           throw std::invalid_argument("es alpha must lie in (0, 1], got " +
                                                       to_string(es.alpha));
                   },
                   [](const PowerDistortion& pw) {
                       if (!(pw.alpha >= 0.0 && pw.alpha <= 1.0))
                           throw std::invalid_argument("power alpha must lie in [0, 1]");
                   },
                   [](const PiecewiseDistortion& pw) {
                       const auto& k = pw.knots;
                       if (k.size() < 2) throw std::invalid_argument("piecewise needs >= 2 knots");
                       if (k.front() != std::pair{0.0, 0.0} || k.back() != std::pair{1.0, 1.0})
                           throw std::invalid_argument("piecewise must run from (0,0) to (1,1)");
                       double prev_slope = 0.0;
                       for (std::size_t i = 1; i < k.size(); ++i) {
                           const double dp = k[i].first - k[i - 1].first;
                           if (!(dp > 0.0))
                               throw std::invalid_argument("piecewise knots must be increasing in p");
                           const double slope = (k[i].second - k[i - 1].second) / dp;
                           if (slope < -1e-12)
                               throw std::invalid_argument("piecewise distortion must be nondecreasing");
                           if (slope < prev_slope - 1e-12)
                               throw std::invalid_argument("piecewise distortion must be convex");
                           prev_slope = slope;
                       }
                   },
               },
               kind_);
}

std::optional<Rational> DistortionFunction::exact(const Rational& p) const {
    if (std::holds_alternative<Expectation>(kind_)) return p;
    if (const auto* es = std::get_if<ExpectedShortfall>(&kind_)) {
        const Rational v = (p - (1 - es->alpha)) / es->alpha;
        return v > 0 ? v : Rational(0);
    }
    return std::nullopt;
}

double DistortionFunction::operator()(double p) const {
    p = std::clamp(p, 0.0, 1.0);
    return std::visit(overloaded{
                          [&](const Expectation&) { return p; },
                          [&](const ExpectedShortfall& es) {
                              const double a = to_double(es.alpha);
                              return std::max(0.0, (p - (1.0 - a)) / a);
                          },
                          [&](const PowerDistortion& pw) { return std::pow(p, 1.0 + pw.alpha); },
                          [&](const PiecewiseDistortion& pw) { return piecewise_at(pw, p); },
                      },
                      kind_);
}

double DistortionFunction::operator()(const Rational& p) const {
    if (auto e = exact(p)) return to_double(*e);
    return (*this)(to_double(p));
}

std::string DistortionFunction::name() const {
    return std::visit(overloaded{
                          [](const Expectation&) { return std::string("expectation"); },
                          [](const ExpectedShortfall& es) { return "es(" + to_string(es.alpha) + ")"; },
                          [](const PowerDistortion& pw) {
                              std::ostringstream os;
                              os << "power(" << pw.alpha << ")";
                              return os.str();
                          },
                          [](const PiecewiseDistortion& pw) {
                              return "piecewise(" + std::to_string(pw.knots.size()) + " knots)";
                          },
                      },
                      kind_);
}

// ---------------------------------------------------------------------------
// ScenarioSet / CoherentUtility

void ScenarioSet::validate(std::size_t n) const {
    if (measures.empty()) throw std::invalid_argument("scenario set is empty");
    for (std::size_t q = 0; q < measures.size(); ++q) {
        const auto& m = measures[q];
        if (m.size() != n)
            throw std::invalid_argument("scenario " + std::to_string(q) + " has " +
                                        std::to_string(m.size()) + " weights, expected " +
                                        std::to_string(n));
        double s = 0.0;
        for (double w : m) {
            if (!(w >= 0.0) || !std::isfinite(w))
                throw std::invalid_argument("scenario " + std::to_string(q) + " has a negative weight");
            s += w;
        }
        if (std::abs(s - 1.0) > 1e-9)
            throw std::invalid_argument("scenario " + std::to_string(q) + " does not sum to 1");
    }
}

std::string CoherentUtility::name() const {
    return std::visit(overloaded{
                          [](const DistortionFunction& d) { return d.name(); },
                          [](const ScenarioSet& s) {
                              return "scenario(" + std::to_string(s.measures.size()) + ")";
                          },
                          [](const ProductExample& p) {
                              return "product(" + std::to_string(p.rows) + "x" +
                                     std::to_string(p.cols) + ")";
                          },
                      },
                      v_);
}

// ---------------------------------------------------------------------------
// Evaluation

double choquet_eval(std::span<const double> values, std::span<const Rational> masses,
                    const DistortionFunction& psi) {
    if (values.size() != masses.size()) throw std::invalid_argument("choquet: size mismatch");
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("choquet: empty support");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });

    Rational total = 0;
    for (const auto& m : masses) total += m;

    // Equal values are taken as one level so ties never depend on the ordering.
    double result = 0.0;
    Rational cum = 0;
    double psi_prev = 0.0;
    for (std::size_t i = 0; i < n;) {
        const double v = values[order[i]];
        std::size_t j = i;
        while (j < n && values[order[j]] == v) cum += masses[order[j++]];
        const double psi_cur = (j == n) ? 1.0 : psi(cum / total);
        result += v * (psi_cur - psi_prev);
        psi_prev = psi_cur;
        i = j;
    }
    return result;
}

double choquet_eval(const RandomVariable& x, const DistortionFunction& psi, const OutcomeSpace& space) {
    if (x.size() != space.size()) throw std::invalid_argument("random variable size mismatch");
    return choquet_eval(x.view(), space.masses(), psi);
}

ScenarioMin scenario_min_eval(const RandomVariable& x, const ScenarioSet& s) {
    if (s.measures.empty()) throw std::invalid_argument("scenario set is empty");
    ScenarioMin best{0.0, 0};
    for (std::size_t q = 0; q < s.measures.size(); ++q) {
        const auto& m = s.measures[q];
        if (m.size() != x.size()) throw std::invalid_argument("scenario size mismatch");
        double e = 0.0;
        for (std::size_t i = 0; i < m.size(); ++i) e += m[i] * x[i];
        if (q == 0 || e < best.value) best = {e, q};
    }
    return best;
}

ScenarioSet core_extreme_points(const DistortionFunction& psi, const OutcomeSpace& space,
                                std::size_t cap) {
    const std::size_t n = space.size();
    if (n > cap)
        throw std::invalid_argument("space too large: " + std::to_string(n) +
                                    " outcomes exceeds the core enumeration cap of " +
                                    std::to_string(cap));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    ScenarioSet out;
    std::set<std::vector<long long>> seen;
    do {
        std::vector<double> q(n, 0.0);
        Rational cum = 0;
        double prev = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cum += space.mass(perm[i]);
            const double cur = (i + 1 == n) ? 1.0 : psi(cum);
            q[perm[i]] = cur - prev;
            prev = cur;
        }
        std::vector<long long> key(n);
        for (std::size_t i = 0; i < n; ++i) key[i] = std::llround(q[i] * 1e12);
        if (seen.insert(std::move(key)).second) out.measures.push_back(std::move(q));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

std::pair<OutcomeSpace, Filtration> product_space(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw std::invalid_argument("product grid must be nonempty");
    const std::size_t n = rows * cols;
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            labels.push_back("r" + std::to_string(r) + "c" + std::to_string(c));
    OutcomeSpace space(std::move(labels),
                       std::vector<Rational>(n, Rational(1, static_cast<long long>(n))));
    std::vector<Partition::Block> blocks(rows);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) blocks[r].push_back(r * cols + c);
    return {std::move(space), Filtration::two_period(n, Partition(std::move(blocks)))};
}

double product_example_eval(const RandomVariable& x, const ProductExample& ex) {
    if (x.size() != ex.rows * ex.cols)
        throw std::invalid_argument("product example expects " + std::to_string(ex.rows * ex.cols) +
                                    " outcomes, got " + std::to_string(x.size()));
    for (double v : x.values())
        if (v < 0.0) throw std::invalid_argument("example defined for xi >= 0");

    const double cols = static_cast<double>(ex.cols);
    std::vector<double> row(ex.cols);
    double total = 0.0;
    for (std::size_t r = 0; r < ex.rows; ++r) {
        const double alpha = (static_cast<double>(r) + 0.5) / static_cast<double>(ex.rows);
        for (std::size_t c = 0; c < ex.cols; ++c) row[c] = x[r * ex.cols + c];
        std::sort(row.begin(), row.end(), std::greater<>());
        // Layer-cake sum over the sorted row: survival probability k/cols on
        // [row[k], row[k-1]).
        double acc = 0.0;
        for (std::size_t k = 0; k < ex.cols; ++k) {
            const double next = (k + 1 < ex.cols) ? row[k + 1] : 0.0;
            const double survival = static_cast<double>(k + 1) / cols;
            acc += (row[k] - next) * std::pow(survival, 1.0 + alpha);
        }
        total += acc;
    }
    return total / static_cast<double>(ex.rows);
}

double evaluate(const CoherentUtility& u, const RandomVariable& x, const OutcomeSpace& space) {
    return std::visit(overloaded{
                          [&](const DistortionFunction& d) { return choquet_eval(x, d, space); },
                          [&](const ScenarioSet& s) { return scenario_min_eval(x, s).value; },
                          [&](const ProductExample& p) {
                              if (space.size() != p.rows * p.cols)
                                  throw std::invalid_argument("product example size mismatch");
                              return product_example_eval(x, p);
                          },
                      },
                      u.variant());
}

CommonotoneCheck is_commonotone_pair(const RandomVariable& x, const RandomVariable& y,
                                     const OutcomeSpace& space) {
    if (x.size() != space.size() || y.size() != space.size())
        throw std::invalid_argument("random variable size mismatch");
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });
    // Sorted by (x, y): a pair is reversed iff y drops somewhere along the order.
    for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const std::size_t a = order[i];
        const std::size_t b = order[i + 1];
        if (y[b] < y[a]) return {false, std::pair{std::min(a, b), std::max(a, b)}};
    }
    return {true, std::nullopt};
}

bool relevance_check(const CoherentUtility& u, const OutcomeSpace& space, std::uint64_t seed) {
    const std::size_t n = space.size();
    const bool product = u.product() != nullptr;
    auto negative_on = [&](const EventSet& a) {
        RandomVariable ind = a.indicator();
        const double value = product ? evaluate(u, RandomVariable::constant(n, 1.0) - ind, space) - 1.0
                                     : evaluate(u, -1.0 * ind, space);
        return value < 0.0;
    };
    if (n <= 20) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
            EventSet a = EventSet::empty(n);
            for (std::size_t i = 0; i < n; ++i) a.set(i, (mask >> i) & 1U);
            if (!negative_on(a)) return false;
        }
        return true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        EventSet a = EventSet::empty(n);
        a.set(i, true);
        if (!negative_on(a)) return false;
    }
    std::mt19937_64 rng(seed);
    for (int trial = 0; trial < 2048; ++trial) {
        EventSet a = EventSet::empty(n);
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            const bool in = (rng() & 1U) != 0;
            a.set(i, in);
            any = any || in;
        }
        if (any && !negative_on(a)) return false;
    }
    return true;
}

}  // namespace riskcal
