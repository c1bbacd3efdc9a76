#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rpu/game.hpp"

namespace rpu::structure {

struct DominationResult {
    Game game;                      // without dominated messages
    std::vector<std::size_t> kept;  // original index of each remaining message
    std::vector<std::size_t> removed;
};

// Drops every message that is a strict subset of another message.
DominationResult remove_dominated(const Game& game);
// Lifts a strategy on the reduced game back to the original, with zero mass on removed messages.
QuizStrategy embed_strategy(const Game& original, const DominationResult& reduced, const QuizStrategy& p);

struct Component {
    Game game;                         // marginal renormalized to the component
    std::vector<std::size_t> outcomes; // original outcome index per component outcome
    std::vector<std::size_t> messages; // original message index per component message
    double weight;                     // marginal mass of the component
};

std::vector<Component> decompose(const Game& game);
QuizStrategy recombine(const Game& game, const std::vector<Component>& components,
                       const std::vector<QuizStrategy>& strategies);

bool is_partition(const std::vector<Message>& messages);
bool is_graph_game(const std::vector<Message>& messages);
bool has_dominated(const std::vector<Message>& messages);
std::size_t count_components(std::size_t num_outcomes, const std::vector<Message>& messages);
// Basis exchange over every ordered pair of messages.
bool is_matroid(const std::vector<Message>& messages);

struct Classification {
    bool partition = false;
    bool graph = false;
    bool matroid = false;
    bool connected = false;
    bool has_dominated = false;
    std::size_t components = 0;
};

Classification classify(std::size_t num_outcomes, const std::vector<Message>& messages);
Classification classify(const Game& game);
// "3 outcomes, 2 messages, connected, graph, matroid"
std::string summary_line(const Game& game, const Classification& c);

struct Counterexample {
    Game game;                       // input structure with the constructed marginal
    RcarVector q;                    // RCAR vector of the constructed game
    std::vector<double> initial_q;   // before the greedy phase
    bool uniform_branch = false;
    std::size_t y1 = 0;
    std::size_t y2 = 0;
    std::optional<std::size_t> x2;   // uniform branch only
    std::vector<std::size_t> tight_messages;
    std::size_t uniform_message = 0;     // tight, q uniform on it
    std::size_t nonuniform_message = 0;  // tight, intersects uniform_message, q not uniform
    QuizStrategy strategy;               // RCAR strategy that certifies q
};

// Marginal on which some symmetric strictly proper loss has a non-RCAR optimum.
// Needs a connected structure without dominated messages that is neither a graph nor a matroid.
// `epsilon` is the uniform-branch perturbation; nullopt picks the default.
Counterexample counterexample_marginal(const Game& game, std::optional<double> epsilon = std::nullopt);

}  // namespace rpu::structure
