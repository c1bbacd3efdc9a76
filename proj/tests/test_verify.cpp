#include <doctest.h>

#include <cmath>

#include "rpu/solver.hpp"
#include "rpu/verify.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_games.hpp"

using namespace rpu;
using rpu::testing::bundled;
using rpu::testing::Rng;

namespace {

struct KtCase {
    const char* name;
    Game game;
    std::vector<std::vector<double>> table;
    std::vector<double> lambda;
    double tol;
};

const double l2 = std::log(2.0), l3 = std::log(3.0);

std::vector<KtCase> printed_pairs() {
    const double t = 1.0 / 3, s = 1.0 / 6;
    std::vector<std::vector<double>> monty{{t, s, 0}, {0, s, t}};
    std::vector<std::vector<double>> discard{{0.2, 0.2, 0, 0}, {0, 0, 0, 0}, {0, 0, 0.2, 0.4}};
    std::vector<std::vector<double>> split{{t, s, 0, 0}, {0, s, s, s}};
    return {
        {"monty log", bundled("montyhall"), monty, {-std::log(2.0 / 3), -std::log(1.0 / 3), -std::log(2.0 / 3)}, 1e-4},
        {"monty brier", bundled("montyhall", LossKind::Brier), monty, {2.0 / 9, 8.0 / 9, 2.0 / 9}, 1e-4},
        {"monty rand01", bundled("montyhall", LossKind::Randomized01), monty, {0, 1, 0}, 1e-4},
        {"discard log", bundled("message_discard"), discard, {l2, l2, l3, -std::log(2.0 / 3)}, 1e-4},
        {"discard brier", bundled("message_discard", LossKind::Brier), discard, {0.5, 0.5, 8.0 / 9, 2.0 / 9}, 1e-4},
        {"discard rand01", bundled("message_discard", LossKind::Randomized01), discard, {0.3, 0.7, 1, 0}, 1e-4},
        {"split log", bundled("loss_split"), split, {-std::log(2.0 / 3), l3, l3, l3}, 1e-4},
        {"split rand01", bundled("loss_split", LossKind::Randomized01), split, {0, 1, 0.4, 0.6}, 1e-4},
        {"outcome discard brier", bundled("outcome_discard"), {{0.45, 0.05, 0, 0}, {0, 0, 0.25, 0.25}}, {0.02, 1.62, 0.5, 0.5}, 1e-2},
        {"triangle log", bundled("triangle_discard"), {{0.2, 0.3, 0}, {0, 0.3, 0.2}, {0, 0, 0}},
         {-std::log(0.4), -std::log(0.6), -std::log(0.4)}, 1e-4},
    };
}

QuizStrategy random_strategy(Rng& rng, const Game& g) {
    std::vector<double> joint(g.incidence().size());
    for (std::size_t x = 0; x < g.num_outcomes(); ++x) {
        const auto& idx = g.incidence().of_outcome(x);
        auto split = rpu::testing::random_marginal(rng, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k) joint[idx[k]] = split[k] * g.marginal()[x];
    }
    return make_quiz_strategy(g, joint);
}

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("printed strategy and KT pairs pass") {
    for (const auto& c : printed_pairs()) {
        CAPTURE(c.name);
        auto p = quiz_strategy_from_table(c.game, c.table);
        CHECK(verify::check_kt(c.game, p, KtVector{c.lambda}, c.tol).passed);
    }
}

TEST_CASE("perturbing a touched coordinate breaks the certificate") {
    for (const auto& c : printed_pairs()) {
        if (c.tol > 1e-3) continue;
        auto p = quiz_strategy_from_table(c.game, c.table);
        auto masses = message_masses(c.game, p);
        for (std::size_t y = 0; y < c.game.num_messages(); ++y) {
            if (masses[y] <= 0.0) continue;
            for (std::size_t x : c.game.message(y)) {
                for (double d : {0.05, -0.05}) {
                    CAPTURE(c.name);
                    CAPTURE(x);
                    CAPTURE(d);
                    auto lambda = c.lambda;
                    lambda[x] += d;
                    CHECK_FALSE(verify::check_kt(c.game, p, KtVector{lambda}, 1e-4).passed);
                }
            }
        }
    }
}

TEST_CASE("unused message is reported as dominating") {
    Game g = bundled("message_discard");
    auto p = quiz_strategy_from_table(g, {{0.2, 0.2, 0, 0}, {0, 0, 0, 0}, {0, 0, 0.2, 0.4}});
    auto cert = verify::check_kt(g, p, KtVector{{l2, l2, l3, -std::log(2.0 / 3)}}, 1e-6);
    REQUIRE(cert.passed);
    CHECK(cert.per_message[0].mode == verify::MessageMode::Supporting);
    CHECK(cert.per_message[1].mode == verify::MessageMode::Dominating);
    CHECK(cert.per_message[2].mode == verify::MessageMode::Supporting);
}

TEST_CASE("rcar certificate implies the log KT certificate") {
    Rng rng(41);
    for (int t = 0; t < 25; ++t) {
        Game g = rpu::testing::random_game(rng, 5, 5);
        auto r = solver::solve_rcar(g);
        REQUIRE(verify::check_rcar(g, r.report.strategy, r.q, 1e-6).passed);
        std::vector<double> lambda;
        for (double q : r.q.q) lambda.push_back(-std::log(q));
        CHECK(verify::check_kt(g, r.report.strategy, KtVector{lambda}, 1e-5).passed);
    }
}

TEST_CASE("rcar fails on a non-constant conditional") {
    Game g = bundled("montyhall");
    auto p = quiz_strategy_from_table(g, {{1.0 / 3, 1.0 / 3, 0}, {0, 0, 1.0 / 3}});
    auto cert = verify::check_rcar(g, p, RcarVector{{0.5, 0.5, 1.0}}, 1e-9);
    CHECK_FALSE(cert.passed);
    auto good = quiz_strategy_from_table(g, {{1.0 / 3, 1.0 / 6, 0}, {0, 1.0 / 6, 1.0 / 3}});
    CHECK(verify::check_rcar(g, good, RcarVector{{2.0 / 3, 1.0 / 3, 2.0 / 3}}, 1e-9).passed);
}

TEST_CASE("weak duality for arbitrary strategy pairs") {
    Rng rng(42);
    for (auto kind : {LossKind::Logarithmic, LossKind::Brier, LossKind::Randomized01}) {
        for (int t = 0; t < 100; ++t) {
            Game g = rpu::testing::random_game(rng, 5, 5, LossSpec::of(kind));
            auto p = random_strategy(rng, g);
            ContestantStrategy q;
            for (std::size_t y = 0; y < g.num_messages(); ++y)
                q.per_message.push_back(rpu::testing::random_marginal(rng, g.num_outcomes()));
            CHECK(verify::check_nash_gap(g, p, q) >= -1e-9);
        }
    }
}

TEST_CASE("equalizer variants") {
    Game g = bundled("outcome_discard");
    auto p = quiz_strategy_from_table(g, {{0.45, 0.05, 0, 0}, {0, 0, 0.25, 0.25}});
    CHECK_FALSE(verify::check_equalizer(g, p, KtVector{{0.02, 1.62, 0.5, 0.5}}, 1e-2));

    Game monty = bundled("montyhall");
    auto mp = quiz_strategy_from_table(monty, {{1.0 / 3, 1.0 / 6, 0}, {0, 1.0 / 6, 1.0 / 3}});
    KtVector kt{{-std::log(2.0 / 3), -std::log(1.0 / 3), -std::log(2.0 / 3)}};
    CHECK(verify::check_equalizer(monty, mp, kt, 1e-9));

    // unused message: the used-only variant ignores it, the all-messages variant does not
    Game tri = bundled("triangle_discard");
    auto tp = quiz_strategy_from_table(tri, {{0.2, 0.3, 0}, {0, 0.3, 0.2}, {0, 0, 0}});
    KtVector tkt{{-std::log(0.4), -std::log(0.6), -std::log(0.4)}};
    CHECK(verify::check_equalizer(tri, tp, tkt, 1e-9));
    ContestantStrategy q{{{0.4, 0.6, 0}, {0, 0.6, 0.4}, {0.5, 0, 0.5}}};
    CHECK_FALSE(verify::check_equalizer(tri, q, tkt, 1e-9));
}

TEST_CASE("loss exchange between symmetric outcomes") {
    Game g = bundled("montyhall");
    auto p = quiz_strategy_from_table(g, {{1.0 / 3, 1.0 / 6, 0}, {0, 1.0 / 6, 1.0 / 3}});
    CHECK(verify::check_loss_exchange(g, p, KtVector{{0.4, 1.1, 0.4}}, 1e-9).passed);
    CHECK_FALSE(verify::check_loss_exchange(g, p, KtVector{{0.5, 1.1, 0.4}}, 1e-9).passed);
}

TEST_CASE("brute force value approaches the optimum") {
    Game g = bundled("montyhall", LossKind::Brier);
    CHECK(verify::brute_force_value(g, 60) == doctest::Approx(4.0 / 9).epsilon(1e-9));
}

}
