#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace rpu::detail {

// minimize cost . x  subject to each row (== or <=) and x >= 0
struct LinearProgram {
    struct Row {
        std::vector<std::pair<std::size_t, double>> terms;
        double rhs = 0.0;
        bool equality = true;
    };
    std::size_t num_vars = 0;
    std::vector<double> cost;
    std::vector<Row> rows;

    std::size_t add_row(std::vector<std::pair<std::size_t, double>> terms, double rhs, bool equality) {
        rows.push_back(Row{std::move(terms), rhs, equality});
        return rows.size() - 1;
    }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;
    double objective = 0.0;
    // y with cost . x = rhs . y at the optimum; y_i <= 0 on inequality rows
    std::vector<double> duals;
    std::size_t pivots = 0;
};

LpSolution solve_lp(const LinearProgram& lp, std::size_t max_pivots = 200000);

}  // namespace rpu::detail
