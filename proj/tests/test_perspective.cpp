#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "perspective.hpp"
#include "rpu/losses.hpp"
#include "support/oracles.hpp"
#include "support/random_games.hpp"

using namespace rpu;
using rpu::testing::Rng;

namespace {

std::vector<LossSpec> smooth_losses() {
    return {LossSpec::of(LossKind::Logarithmic), LossSpec::of(LossKind::Brier),
            LossSpec{LossKind::SkewedLog, {}, {0.5, 1.0, 2.0, 1.5, 0.7}, std::nullopt},
            losses::affine_transform(LossSpec::of(LossKind::Brier), 2.5, {0.1, -0.3, 0.0, 1.0, 0.2})};
}

}  // namespace

TEST_SUITE("perspective") {

TEST_CASE("gradient and hessian agree with finite differences") {
    Rng rng(5);
    std::vector<double> scratch(5, 0.0);
    for (const auto& spec : smooth_losses()) {
        for (int t = 0; t < 20; ++t) {
            auto outcomes = rpu::testing::random_subset(rng, 5, 2, 4);
            std::vector<double> v = rpu::testing::random_marginal(rng, outcomes.size());
            for (double& a : v) a *= 0.6;
            auto phi = [&](const std::vector<double>& w) { return detail::message_phi(spec, outcomes, w.data(), scratch); };
            std::vector<double> grad(v.size());
            detail::message_gradient(spec, outcomes, v.data(), grad.data());
            auto num = rpu::testing::numeric_gradient(phi, v);
            for (std::size_t k = 0; k < v.size(); ++k) CHECK(grad[k] == doctest::Approx(num[k]).epsilon(1e-6));

            double s = 0.0;
            for (double a : v) s += a;
            std::vector<double> full(5, 0.0);
            for (std::size_t k = 0; k < v.size(); ++k) full[outcomes[k]] = v[k] / s;
            for (std::size_t k = 0; k < v.size(); ++k)
                CHECK(grad[k] == doctest::Approx(losses::loss(spec, outcomes[k], full)).epsilon(1e-9));

            Eigen::MatrixXd hess;
            detail::message_hessian(spec, outcomes, v.data(), hess);
            for (std::size_t j = 0; j < v.size(); ++j) {
                auto gj = [&](const std::vector<double>& w) {
                    std::vector<double> g(w.size());
                    detail::message_gradient(spec, outcomes, w.data(), g.data());
                    return g[j];
                };
                auto row = rpu::testing::numeric_gradient(gj, v);
                for (std::size_t k = 0; k < v.size(); ++k)
                    CHECK(hess(static_cast<long>(j), static_cast<long>(k)) == doctest::Approx(row[k]).epsilon(1e-5));
            }
            for (double a : scratch) CHECK(a == 0.0);
        }
    }
}

TEST_CASE("phi is the mass times the entropy of the normalized vector") {
    std::vector<double> scratch(3, 0.0);
    std::vector<double> v{0.2, 0.1};
    double phi = detail::message_phi(LossSpec::of(LossKind::Logarithmic), {0, 2}, v.data(), scratch);
    CHECK(phi == doctest::Approx(0.3 * rpu::testing::log_entropy({2.0 / 3.0, 1.0 / 3.0})));
}

TEST_CASE("max gap point beats a dense grid") {
    Rng rng(6);
    for (const auto& spec : smooth_losses()) {
        for (int t = 0; t < 10; ++t) {
            Message outcomes{1, 3};
            std::vector<double> lambda(5);
            for (double& l : lambda) l = std::uniform_real_distribution<double>(-0.5, 1.5)(rng);
            auto w = detail::max_gap_point(spec, outcomes, lambda, 5);
            auto gap = [&](double a) {
                std::vector<double> p(5, 0.0);
                p[1] = a;
                p[3] = 1.0 - a;
                return losses::entropy(spec, p) - lambda[1] * a - lambda[3] * (1.0 - a);
            };
            double best = -1e300;
            for (int i = 0; i <= 10000; ++i) best = std::max(best, gap(i / 10000.0));
            CHECK(w[0] == 0.0);
            CHECK(w[1] + w[3] == doctest::Approx(1.0));
            CHECK(gap(w[1]) >= best - 1e-8);
        }
    }
}

TEST_CASE("projection onto the simplex") {
    auto p = detail::project_to_simplex({0.2, 0.3, 0.5});
    CHECK(p[0] == doctest::Approx(0.2));
    CHECK(p[2] == doctest::Approx(0.5));
    auto q = detail::project_to_simplex({2.0, 0.0, -1.0});
    CHECK(q == std::vector<double>{1.0, 0.0, 0.0});
    Rng rng(7);
    for (int t = 0; t < 50; ++t) {
        std::vector<double> v(3);
        for (double& a : v) a = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
        auto r = detail::project_to_simplex(v);
        double d = 0.0;
        for (int i = 0; i < 3; ++i) d += (r[i] - v[i]) * (r[i] - v[i]);
        double nearest = 1e300;
        for (int i = 0; i <= 200; ++i)
            for (int j = 0; i + j <= 200; ++j) {
                double a = i / 200.0, b = j / 200.0, c = 1.0 - a - b;
                nearest = std::min(nearest, (a - v[0]) * (a - v[0]) + (b - v[1]) * (b - v[1]) + (c - v[2]) * (c - v[2]));
            }
        CHECK(d <= nearest + 1e-12);
    }
}

}
