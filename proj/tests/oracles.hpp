#pragma once

// Reference computations used to cross-check the library. Each one follows a
// different route from the production code.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "riskcal/probes.hpp"
#include "riskcal/space.hpp"

namespace oracle {

using riskcal::Rational;

// Layer-cake form over distinct ascending levels:
// u(x) = v_0 + sum_j (v_{j+1} - v_j) * psi(P[x > v_j]).
inline double layer_cake(const std::vector<double>& x, const std::vector<double>& p,
                         const std::function<double(double)>& psi) {
    std::vector<double> levels = x;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    double u = levels.front();
    for (std::size_t j = 0; j + 1 < levels.size(); ++j) {
        double above = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] > levels[j]) above += p[i];
        u += (levels[j + 1] - levels[j]) * psi(above / total);
    }
    return u;
}

// Rockafellar-Uryasev: ES_alpha(x) = max_c { c - E[(c - x)^+] / alpha }, attained at an atom.
inline double es_ru(const std::vector<double>& x, const std::vector<double>& p, double alpha) {
    double best = -INFINITY;
    for (double c : x) {
        double shortfall = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) shortfall += p[i] * std::max(0.0, c - x[i]);
        best = std::max(best, c - shortfall / alpha);
    }
    return best;
}

// Min of E_Q[x] over all permutation marginal vectors of psi o P, no deduplication.
inline double core_min(const std::vector<double>& x, const std::vector<double>& p,
                       const std::function<double(double)>& psi) {
    std::vector<std::size_t> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    double best = INFINITY;
    do {
        double acc = 0.0;
        double prev = 0.0;
        double e = 0.0;
        for (std::size_t i : perm) {
            acc += p[i];
            const double cur = psi(std::min(1.0, acc));
            e += (cur - prev) * x[i];
            prev = cur;
        }
        best = std::min(best, e);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// True when the masses split into n groups of equal total, by trying every assignment.
inline bool splits_equally(const std::vector<Rational>& masses, std::size_t n) {
    const std::size_t k = masses.size();
    std::size_t combos = 1;
    for (std::size_t i = 0; i < k; ++i) combos *= n;
    Rational total = 0;
    for (const auto& m : masses) total += m;
    const Rational target = total / static_cast<long>(n);
    for (std::size_t code = 0; code < combos; ++code) {
        std::vector<Rational> sums(n, Rational(0));
        std::size_t c = code;
        for (std::size_t i = 0; i < k; ++i, c /= n) sums[c % n] += masses[i];
        if (std::all_of(sums.begin(), sums.end(), [&](const Rational& s) { return s == target; }))
            return true;
    }
    return false;
}

inline std::vector<double> uniform_masses(std::size_t n) { return std::vector<double>(n, 1.0 / n); }

inline std::vector<double> draw(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& e : v) e = lo + (hi - lo) * riskcal::unit_uniform(rng);
    return v;
}

// Coarse values so that ties occur often.
inline std::vector<double> draw_coarse(std::mt19937_64& rng, std::size_t n) {
    std::vector<double> v(n);
    for (auto& e : v) e = std::floor(5.0 * riskcal::unit_uniform(rng)) - 2.0;
    return v;
}

}  // namespace oracle
