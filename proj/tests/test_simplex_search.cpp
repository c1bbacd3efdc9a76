#include <doctest.h>

#include <cmath>

#include "simplex_search.hpp"

using namespace rpu::detail;

TEST_SUITE("simplex_search") {

TEST_CASE("grid sizes are binomial coefficients") {
    CHECK(simplex_grid_size(1, 10) == 1.0);
    CHECK(simplex_grid_size(2, 10) == 11.0);
    CHECK(simplex_grid_size(3, 4) == 15.0);
    CHECK(simplex_grid_size(4, 150) == doctest::Approx(585276.0));
    std::size_t r = resolution_for_budget(3, 100000);
    CHECK(simplex_grid_size(3, r) <= 100000.0);
    CHECK(simplex_grid_size(3, r + 1) > 100000.0);
}

TEST_CASE("compositions are visited once each") {
    std::size_t count = 0;
    for_each_composition(3, 4, [&](const std::vector<std::size_t>& k) {
        CHECK(k[0] + k[1] + k[2] == 4);
        ++count;
        return true;
    });
    CHECK(count == 15);
    std::size_t stopped = 0;
    for_each_composition(3, 4, [&](const std::vector<std::size_t>&) { return ++stopped < 5; });
    CHECK(stopped == 5);
}

TEST_CASE("search finds an interior maximum off the grid") {
    const std::vector<double> target{0.123, 0.456, 0.421};
    auto f = [&](const std::vector<double>& p) {
        double s = 0.0;
        for (std::size_t i = 0; i < 3; ++i) s -= (p[i] - target[i]) * (p[i] - target[i]);
        return s;
    };
    auto r = maximize_on_simplex(3, f, 10);
    for (std::size_t i = 0; i < 3; ++i) CHECK(r.point[i] == doctest::Approx(target[i]).epsilon(1e-5));
    auto m = minimize_on_simplex(3, [&](const std::vector<double>& p) { return -f(p); }, 10);
    CHECK(m.value == doctest::Approx(-r.value));
}

TEST_CASE("search reaches a vertex maximum") {
    auto r = maximize_on_simplex(4, [](const std::vector<double>& p) { return p[2]; }, 3);
    CHECK(r.point[2] == 1.0);
    CHECK(r.value == 1.0);
}

}
