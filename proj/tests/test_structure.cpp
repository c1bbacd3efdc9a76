#include <doctest.h>

#include <cmath>

#include "rpu/errors.hpp"
#include "rpu/solver.hpp"
#include "rpu/structure.hpp"
#include "rpu/verify.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random_games.hpp"

using namespace rpu;
using rpu::testing::bundled;
using rpu::testing::Rng;

namespace {

ErrorCode counterexample_error(const Game& g) {
    try {
        structure::counterexample_marginal(g);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::ParseError;
}

}  // namespace

TEST_SUITE("structure") {

TEST_CASE("structural predicates on bundled games") {
    auto monty = structure::classify(bundled("montyhall"));
    CHECK(monty.graph);
    CHECK(monty.matroid);
    CHECK(monty.connected);
    CHECK_FALSE(monty.partition);

    auto die = structure::classify(bundled("fairdie"));
    CHECK_FALSE(die.graph);
    CHECK_FALSE(die.matroid);

    auto part = structure::classify(bundled("partition"));
    CHECK(part.partition);
    CHECK(part.components == 3);

    CHECK(structure::classify(bundled("loss_split")).has_dominated == false);
    CHECK(structure::has_dominated({{0, 1}, {0, 1, 2}}));
    CHECK(structure::count_components(4, {{0, 1}, {2}, {3}}) == 3);
}

TEST_CASE("matroid examples") {
    CHECK(structure::is_matroid(bundled("negation4").messages()));
    CHECK(structure::is_matroid(bundled("uniform_2_of_4").messages()));
    // bases {12, 23, 34, 14}: the partition matroid with parallel classes {1, 3} and {2, 4}
    CHECK(structure::is_matroid(bundled("four_cycle").messages()));
    CHECK(rpu::testing::matroid_by_augmentation(bundled("four_cycle").messages()));
    CHECK_FALSE(structure::is_matroid({{0, 1}, {1, 2}, {2, 3}}));
    CHECK_FALSE(structure::is_matroid({{0, 1}, {1, 2, 3}}));
}

TEST_CASE("matroid check agrees with the augmentation axiom") {
    Rng rng(21);
    int matroids = 0;
    for (int t = 0; t < 300; ++t) {
        std::size_t n = rpu::testing::uniform_int(rng, 2, 5);
        std::size_t k = rpu::testing::uniform_int(rng, 1, n);
        std::set<Message> bases;
        std::size_t count = rpu::testing::uniform_int(rng, 1, 6);
        for (std::size_t i = 0; i < count; ++i) bases.insert(rpu::testing::random_subset(rng, n, k, k));
        std::vector<Message> ms(bases.begin(), bases.end());
        bool expected = rpu::testing::matroid_by_augmentation(ms);
        matroids += expected;
        CHECK(structure::is_matroid(ms) == expected);
    }
    CHECK(matroids > 20);
}

TEST_CASE("summary line") {
    Game g = bundled("montyhall");
    CHECK(structure::summary_line(g, structure::classify(g)) == "3 outcomes, 2 messages, connected, graph, matroid");
    Game two = bundled("twocomponents");
    CHECK(structure::summary_line(two, structure::classify(two)) ==
          "5 outcomes, 3 messages, disconnected (2 components), graph, not matroid");
}

TEST_CASE("decompose splits components with their weights") {
    Game g = bundled("twocomponents");
    auto comps = structure::decompose(g);
    REQUIRE(comps.size() == 2);
    CHECK(comps[0].weight == doctest::Approx(0.5));
    CHECK(comps[1].weight == doctest::Approx(0.5));
    CHECK(comps[0].outcomes == std::vector<std::size_t>{0, 1, 2});
    CHECK(comps[1].messages == std::vector<std::size_t>{2});
    CHECK(comps[1].game.marginal()[0] == doctest::Approx(0.5));

    std::vector<QuizStrategy> parts;
    for (const auto& c : comps) parts.push_back(solver::solve_quizmaster(c.game).strategy);
    auto p = structure::recombine(g, comps, parts);
    auto direct = solver::solve_quizmaster(g);
    CHECK(expected_entropy(g, p) == doctest::Approx(direct.value).epsilon(1e-9));
}

TEST_CASE("dominated messages can be dropped") {
    Game g = rpu::testing::make_game({{0, 1}, {0, 1, 2}, {2, 3}}, {0.1, 0.2, 0.3, 0.4});
    auto reduced = structure::remove_dominated(g);
    CHECK(reduced.removed == std::vector<std::size_t>{0});
    CHECK(reduced.kept == std::vector<std::size_t>{1, 2});
    auto small = solver::solve_quizmaster(reduced.game);
    auto lifted = structure::embed_strategy(g, reduced, small.strategy);
    CHECK(message_mass(g, lifted, 0) == 0.0);
    CHECK(expected_entropy(g, lifted) == doctest::Approx(solver::solve_quizmaster(g).value).epsilon(1e-8));
}

TEST_CASE("counterexample preconditions") {
    CHECK(counterexample_error(bundled("montyhall")) == ErrorCode::NotApplicable);
    CHECK(counterexample_error(bundled("negation4")) == ErrorCode::NotApplicable);
    CHECK(counterexample_error(rpu::testing::make_game({{0, 1}, {0, 1, 2}, {2, 3}}, {0.25, 0.25, 0.25, 0.25})) ==
          ErrorCode::NotApplicable);
    CHECK(counterexample_error(rpu::testing::make_game({{0, 1, 2}, {3, 4, 5}}, std::vector<double>(6, 1.0 / 6))) ==
          ErrorCode::NotApplicable);
}

TEST_CASE("fair die counterexample") {
    auto ce = structure::counterexample_marginal(bundled("fairdie"));
    CHECK(ce.uniform_branch);
    double total = 0.0;
    for (double v : ce.game.marginal()) total += v;
    CHECK(total == doctest::Approx(1.0));
    CHECK(verify::check_rcar(ce.game, ce.strategy, ce.q, 1e-9).passed);
    // q is uniform on one tight message and not on an intersecting one
    const auto& u = ce.game.message(ce.uniform_message);
    const auto& nu = ce.game.message(ce.nonuniform_message);
    double su = 0.0, sn = 0.0;
    for (std::size_t x : u) {
        CHECK(ce.q.q[x] == doctest::Approx(ce.q.q[u.front()]));
        su += ce.q.q[x];
    }
    bool uniform = true;
    for (std::size_t x : nu) {
        sn += ce.q.q[x];
        uniform = uniform && std::abs(ce.q.q[x] - ce.q.q[nu.front()]) < 1e-9;
    }
    CHECK(su == doctest::Approx(1.0));
    CHECK(sn == doctest::Approx(1.0));
    CHECK_FALSE(uniform);
}

TEST_CASE("counterexamples certify their own RCAR vector") {
    Rng rng(22);
    for (int t = 0; t < 15; ++t) {
        auto ms = rpu::testing::random_counterexample_structure(rng, 6);
        std::size_t n = 0;
        for (const auto& m : ms) n = std::max(n, m.back() + 1);
        auto ce = structure::counterexample_marginal(rpu::testing::make_game(ms, std::vector<double>(n, 1.0 / n)));
        CHECK(verify::check_rcar(ce.game, ce.strategy, ce.q, 1e-9).passed);
        CHECK(ce.game.message(ce.y1) != ce.game.message(ce.y2));
        for (double v : ce.game.marginal()) CHECK(v > 0.0);
    }
}

}
