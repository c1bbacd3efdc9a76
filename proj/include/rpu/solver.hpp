#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rpu/game.hpp"

namespace rpu::solver {

struct SolverOptions {
    std::size_t max_iterations = 200000;  // Newton / pivot budget across all restarts
    double value_tolerance = 1e-10;
    double certificate_tolerance = 1e-6;
    std::uint64_t seed = 0;
    std::size_t restarts = 5;
    double smoothing_epsilon = 1e-9;  // messages lighter than this read as unused when extracting lambda
};

struct SolveReport {
    QuizStrategy strategy;
    KtVector kt;
    double value = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::string method;                        // "interior-point" or "linear-program"
    std::map<std::string, double> residuals;
    std::vector<double> trace;                 // expected entropy after each barrier stage
};

// Maximizes expected entropy over quizmaster strategies. Hard losses are solved through their
// randomized counterpart, which has the same entropy. Never throws on non-convergence;
// check `converged`.
SolveReport solve_quizmaster(const Game& game, const SolverOptions& options = {});

struct RcarResult {
    RcarVector q;
    SolveReport report;  // logarithmic-loss solve the vector was read from
};

// Unique RCAR vector of the structure and marginal; the game's own loss is ignored.
// Throws DidNotConverge when the RCAR conditions cannot be certified.
RcarResult solve_rcar(const Game& game, const SolverOptions& options = {});

// Contestant strategy realizing the KT vector of `report` on every message.
// Throws NoFeasibleResponse when some message admits no response within tolerance.
ContestantStrategy solve_contestant(const Game& game, const SolveReport& report,
                                    const SolverOptions& options = {});

struct StableSetResult {
    std::vector<std::size_t> stable_set;  // outcomes never sharing a message
    double weight = 0.0;
    ContestantStrategy strategy;
    double worst_case = 0.0;  // 1 - weight
};

// Minimax contestant for hard 0-1 loss by branch and bound; throws TooLarge above 30 outcomes.
StableSetResult solve_hard01_contestant(const Game& game);

struct OracleResult {
    QuizStrategy strategy;
    double value = 0.0;
    double grid_points = 0.0;
};

// Best grid strategy with every row a multiple of p_x / resolution. The last free coordinate is
// searched from the previous maximizer with a bisection fallback, which is exact on a concave
// line. Throws TooLarge when the enumerated part exceeds 1e7 points.
OracleResult oracle_grid(const Game& game, std::size_t resolution);

}  // namespace rpu::solver
