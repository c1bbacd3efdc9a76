#include <doctest.h>

#include <cmath>

#include "lp.hpp"
#include "support/oracles.hpp"
#include "support/random_games.hpp"

using namespace rpu::detail;
using rpu::testing::Rng;

TEST_SUITE("lp") {

TEST_CASE("small program with equality and inequality rows") {
    // min -x - 2y  s.t. x + y <= 4, x - y = 1
    LinearProgram lp;
    lp.num_vars = 2;
    lp.cost = {-1.0, -2.0};
    lp.add_row({{0, 1.0}, {1, 1.0}}, 4.0, false);
    lp.add_row({{0, 1.0}, {1, -1.0}}, 1.0, true);
    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(2.5));
    CHECK(s.x[1] == doctest::Approx(1.5));
    CHECK(s.objective == doctest::Approx(-5.5));
    CHECK(s.duals[0] * 4.0 + s.duals[1] * 1.0 == doctest::Approx(s.objective));
    CHECK(s.duals[0] <= 1e-12);
}

TEST_CASE("infeasible and unbounded programs") {
    LinearProgram infeasible;
    infeasible.num_vars = 1;
    infeasible.cost = {1.0};
    infeasible.add_row({{0, 1.0}}, -1.0, true);
    CHECK(solve_lp(infeasible).status == LpStatus::Infeasible);

    LinearProgram unbounded;
    unbounded.num_vars = 2;
    unbounded.cost = {-1.0, 0.0};
    unbounded.add_row({{0, 1.0}, {1, -1.0}}, 1.0, false);
    CHECK(solve_lp(unbounded).status == LpStatus::Unbounded);
}

TEST_CASE("negative right-hand sides are handled") {
    // min x  s.t. -x <= -3
    LinearProgram lp;
    lp.num_vars = 1;
    lp.cost = {1.0};
    lp.add_row({{0, -1.0}}, -3.0, false);
    auto s = solve_lp(lp);
    REQUIRE(s.status == LpStatus::Optimal);
    CHECK(s.x[0] == doctest::Approx(3.0));
    CHECK(s.duals[0] * -3.0 == doctest::Approx(3.0));
}

TEST_CASE("random bounded programs match vertex enumeration") {
    Rng rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 150; ++t) {
        std::size_t n = rpu::testing::uniform_int(rng, 1, 3);
        std::size_t m = rpu::testing::uniform_int(rng, 1, 4);
        rpu::testing::DenseLp dense;
        LinearProgram lp;
        lp.num_vars = n;
        for (std::size_t j = 0; j < n; ++j) dense.c.push_back(u(rng));
        lp.cost = dense.c;
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> row(n);
            std::vector<std::pair<std::size_t, double>> terms;
            for (std::size_t j = 0; j < n; ++j) {
                row[j] = u(rng);
                terms.emplace_back(j, row[j]);
            }
            double rhs = u(rng);
            dense.a.push_back(row);
            dense.b.push_back(rhs);
            lp.add_row(terms, rhs, false);
        }
        // box keeps every program bounded
        std::vector<std::pair<std::size_t, double>> box;
        std::vector<double> ones(n, 1.0);
        for (std::size_t j = 0; j < n; ++j) box.emplace_back(j, 1.0);
        dense.a.push_back(ones);
        dense.b.push_back(3.0);
        lp.add_row(box, 3.0, false);

        double reference = rpu::testing::vertex_enumeration(dense);
        auto s = solve_lp(lp);
        if (std::isinf(reference)) {
            CHECK(s.status == LpStatus::Infeasible);
            continue;
        }
        REQUIRE(s.status == LpStatus::Optimal);
        CHECK(s.objective == doctest::Approx(reference).epsilon(1e-9));
        double dual_value = 0.0;
        for (std::size_t i = 0; i < dense.b.size(); ++i) {
            CHECK(s.duals[i] <= 1e-9);
            dual_value += s.duals[i] * dense.b[i];
        }
        CHECK(dual_value == doctest::Approx(s.objective).epsilon(1e-9));
        // dual feasibility: c - A^T y >= 0
        for (std::size_t j = 0; j < n; ++j) {
            double reduced = dense.c[j];
            for (std::size_t i = 0; i < dense.b.size(); ++i) reduced -= dense.a[i][j] * s.duals[i];
            CHECK(reduced >= -1e-9);
        }
    }
}

}
