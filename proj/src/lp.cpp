#include "lp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace rpu::detail {

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;

struct Tableau {
    Eigen::MatrixXd t;              // m rows, columns = variables + rhs
    std::vector<std::size_t> basis; // basic column per row
    std::size_t pivots = 0;

    std::size_t rhs_col() const { return static_cast<std::size_t>(t.cols()) - 1; }

    void pivot(std::size_t r, std::size_t c) {
        t.row(r) /= t(r, c);
        for (Eigen::Index i = 0; i < t.rows(); ++i) {
            if (static_cast<std::size_t>(i) == r) continue;
            double f = t(i, c);
            if (f != 0.0) t.row(i) -= f * t.row(r);
        }
        basis[r] = c;
        ++pivots;
    }

    // Bland's rule; columns at or beyond `limit` never enter.
    LpStatus run(const std::vector<double>& cost, std::size_t limit, std::size_t max_pivots) {
        const std::size_t m = basis.size();
        while (true) {
            if (pivots >= max_pivots) return LpStatus::IterationLimit;
            std::size_t enter = limit;
            for (std::size_t j = 0; j < limit; ++j) {
                double r = cost[j];
                for (std::size_t i = 0; i < m; ++i) r -= cost[basis[i]] * t(i, j);
                if (r < -kCostEps) {
                    enter = j;
                    break;
                }
            }
            if (enter == limit) return LpStatus::Optimal;
            std::size_t leave = m;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m; ++i) {
                double a = t(i, enter);
                if (a <= kPivotEps) continue;
                double ratio = t(i, rhs_col()) / a;
                if (ratio < best - 1e-15 || (std::abs(ratio - best) <= 1e-15 && leave < m && basis[i] < basis[leave])) {
                    best = ratio;
                    leave = i;
                }
            }
            if (leave == m) return LpStatus::Unbounded;
            pivot(leave, enter);
        }
    }
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, std::size_t max_pivots) {
    const std::size_t n = lp.num_vars;
    const std::size_t m = lp.rows.size();
    std::size_t num_slack = 0;
    for (const auto& r : lp.rows)
        if (!r.equality) ++num_slack;
    // columns: structural | slack | artificial (one per row) | rhs
    const std::size_t art0 = n + num_slack;
    const std::size_t cols = art0 + m + 1;
    Tableau tab{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(cols)),
                std::vector<std::size_t>(m), 0};
    std::vector<double> sign(m, 1.0);
    std::vector<std::size_t> initial(m);
    std::size_t slack = n;
    for (std::size_t i = 0; i < m; ++i) {
        const auto& row = lp.rows[i];
        double s = row.rhs < 0.0 ? -1.0 : 1.0;
        sign[i] = s;
        for (const auto& [j, a] : row.terms) tab.t(i, j) += s * a;
        tab.t(i, cols - 1) = s * row.rhs;
        tab.t(i, art0 + i) = 1.0;
        if (!row.equality) {
            tab.t(i, slack) = s;
            if (s > 0.0) {
                initial[i] = slack;  // slack starts basic, artificial stays idle
            } else {
                initial[i] = art0 + i;
            }
            ++slack;
        } else {
            initial[i] = art0 + i;
        }
    }
    // the basis columns must be unit vectors; an inequality row keeping its slack basic does so
    tab.basis = initial;

    LpSolution sol;
    std::vector<double> phase1(cols - 1, 0.0);
    bool needs_phase1 = false;
    for (std::size_t i = 0; i < m; ++i) {
        if (initial[i] >= art0) {
            phase1[art0 + i] = 1.0;
            needs_phase1 = true;
        }
    }
    if (needs_phase1) {
        LpStatus st = tab.run(phase1, art0, max_pivots);
        if (st == LpStatus::IterationLimit) {
            sol.status = st;
            sol.pivots = tab.pivots;
            return sol;
        }
        double infeas = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (tab.basis[i] >= art0) infeas += tab.t(i, cols - 1);
        if (infeas > 1e-9) {
            sol.status = LpStatus::Infeasible;
            sol.pivots = tab.pivots;
            return sol;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] < art0) continue;
            for (std::size_t j = 0; j < art0; ++j) {
                if (std::abs(tab.t(i, j)) > 1e-9) {
                    tab.pivot(i, j);
                    break;
                }
            }
        }
    }
    std::vector<double> cost(cols - 1, 0.0);
    for (std::size_t j = 0; j < n && j < lp.cost.size(); ++j) cost[j] = lp.cost[j];
    LpStatus st = tab.run(cost, art0, max_pivots);
    sol.status = st;
    sol.pivots = tab.pivots;
    if (st != LpStatus::Optimal) return sol;

    sol.x.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < n) sol.x[tab.basis[i]] = tab.t(i, cols - 1);
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n && j < lp.cost.size(); ++j) sol.objective += lp.cost[j] * sol.x[j];

    // y' = c_B B^-1 where B^-1 sits in the columns that formed the initial identity
    sol.duals.assign(m, 0.0);
    for (std::size_t r = 0; r < m; ++r) {
        double y = 0.0;
        for (std::size_t i = 0; i < m; ++i) y += cost[tab.basis[i]] * tab.t(i, initial[r]);
        sol.duals[r] = y * sign[r];
    }
    return sol;
}

}  // namespace rpu::detail
