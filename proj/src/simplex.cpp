#include "riskcal/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace riskcal::lp {

namespace {

struct Tableau {
    // rows x (cols + 1); last column is the right-hand side.
    Matrix t;
    std::vector<std::size_t> basis;
    std::size_t cols = 0;

    double& rhs(std::size_t i) { return t[i][cols]; }

    void pivot(std::size_t r, std::size_t c) {
        const double p = t[r][c];
        for (double& v : t[r]) v /= p;
        for (std::size_t i = 0; i < t.size(); ++i) {
            if (i == r) continue;
            const double f = t[i][c];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[r][j];
        }
        basis[r] = c;
    }
};

// Minimizes cost.z over the tableau's polyhedron, entering only allowed columns.
Status optimize(Tableau& tab, const std::vector<double>& cost, const std::vector<bool>& allowed,
                double tol) {
    const std::size_t m = tab.t.size();
    for (std::size_t iter = 0; iter < 100000; ++iter) {
        std::size_t enter = tab.cols;
        for (std::size_t j = 0; j < tab.cols && enter == tab.cols; ++j) {
            if (!allowed[j]) continue;
            double r = cost[j];
            for (std::size_t i = 0; i < m; ++i) r -= cost[tab.basis[i]] * tab.t[i][j];
            if (r < -tol) enter = j;
        }
        if (enter == tab.cols) return Status::optimal;

        std::size_t leave = m;
        double best = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double a = tab.t[i][enter];
            if (a <= tol) continue;
            const double ratio = tab.rhs(i) / a;
            if (leave == m || ratio < best - tol ||
                (std::abs(ratio - best) <= tol && tab.basis[i] < tab.basis[leave])) {
                leave = i;
                best = ratio;
            }
        }
        if (leave == m) return Status::unbounded;
        tab.pivot(leave, enter);
    }
    throw std::runtime_error("simplex iteration limit reached");
}

}  // namespace

Result solve_standard_form(const Matrix& a, const std::vector<double>& b,
                           const std::vector<double>& c, double tol) {
    const std::size_t m = a.size();
    const std::size_t n = c.size();
    if (b.size() != m) throw std::invalid_argument("lp: rhs size mismatch");
    for (const auto& row : a)
        if (row.size() != n) throw std::invalid_argument("lp: row size mismatch");

    Tableau tab;
    tab.cols = n + m;
    tab.t.assign(m, std::vector<double>(n + m + 1, 0.0));
    tab.basis.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = b[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) tab.t[i][j] = sign * a[i][j];
        tab.t[i][n + i] = 1.0;
        tab.rhs(i) = sign * b[i];
        tab.basis[i] = n + i;
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(n + m, 0.0);
    std::fill(phase1.begin() + static_cast<std::ptrdiff_t>(n), phase1.end(), 1.0);
    std::vector<bool> all(n + m, true);
    optimize(tab, phase1, all, tol);
    double infeas = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] >= n) infeas += tab.rhs(i);
    double scale = 1.0;
    for (double v : b) scale = std::max(scale, std::abs(v));
    Result res;
    if (infeas > tol * scale * static_cast<double>(std::max<std::size_t>(m, 1))) {
        res.status = Status::infeasible;
        return res;
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    for (std::size_t i = 0; i < tab.t.size();) {
        if (tab.basis[i] < n) {
            ++i;
            continue;
        }
        std::size_t col = n;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(tab.t[i][j]) > tol) {
                col = j;
                break;
            }
        }
        if (col < n) {
            tab.pivot(i, col);
            ++i;
        } else {
            tab.t.erase(tab.t.begin() + static_cast<std::ptrdiff_t>(i));
            tab.basis.erase(tab.basis.begin() + static_cast<std::ptrdiff_t>(i));
        }
    }

    std::vector<double> cost(n + m, 0.0);
    std::copy(c.begin(), c.end(), cost.begin());
    std::vector<bool> structural(n + m, false);
    std::fill(structural.begin(), structural.begin() + static_cast<std::ptrdiff_t>(n), true);
    res.status = optimize(tab, cost, structural, tol);
    res.z.assign(n, 0.0);
    for (std::size_t i = 0; i < tab.t.size(); ++i)
        if (tab.basis[i] < n) res.z[tab.basis[i]] = std::max(0.0, tab.rhs(i));
    res.objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) res.objective += c[j] * res.z[j];
    return res;
}

Feasibility solve_inequalities(const Matrix& g, const std::vector<double>& h, double tol) {
    const std::size_t m = g.size();
    if (h.size() != m) throw std::invalid_argument("lp: rhs size mismatch");
    const std::size_t k = m == 0 ? 0 : g.front().size();

    Feasibility out;
    if (m == 0) {
        out.feasible = true;
        out.point.assign(k, 0.0);
        return out;
    }

    // G y+ - G y- - s = h with y+, y-, s >= 0.
    Matrix a(m, std::vector<double>(2 * k + m, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            a[i][j] = g[i][j];
            a[i][k + j] = -g[i][j];
        }
        a[i][2 * k + i] = -1.0;
    }
    const auto primal = solve_standard_form(a, h, std::vector<double>(2 * k + m, 0.0), tol);
    if (primal.status != Status::infeasible) {
        out.feasible = true;
        out.point.resize(k);
        for (std::size_t j = 0; j < k; ++j) out.point[j] = primal.z[j] - primal.z[k + j];
        return out;
    }

    // max h.w s.t. G^T w = 0, sum w = 1, w >= 0.
    Matrix dual(k + 1, std::vector<double>(m, 0.0));
    std::vector<double> rhs(k + 1, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m; ++i) dual[j][i] = g[i][j];
    std::fill(dual[k].begin(), dual[k].end(), 1.0);
    rhs[k] = 1.0;
    std::vector<double> cost(m);
    for (std::size_t i = 0; i < m; ++i) cost[i] = -h[i];
    const auto cert = solve_standard_form(dual, rhs, cost, tol);
    if (cert.status != Status::optimal || -cert.objective <= tol)
        throw std::runtime_error("lp: primal infeasible but no Farkas certificate found");
    out.feasible = false;
    out.certificate = cert.z;
    out.certificate_value = -cert.objective;
    return out;
}

}  // namespace riskcal::lp
