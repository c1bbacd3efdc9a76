#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "rpu/losses.hpp"
#include "rpu/tolerances.hpp"

namespace rpu {

// Sorted outcome indices.
using Message = std::vector<std::size_t>;

struct RawGame {
    std::vector<std::string> outcomes;
    std::vector<Message> messages;
    std::vector<double> marginal;
    LossSpec loss;
};

struct IncidencePair {
    std::size_t outcome;
    std::size_t message;
};

// Pairs (x, y) with x in y, grouped by message; pair indices address joint strategies.
class IncidenceIndex {
public:
    IncidenceIndex() = default;
    IncidenceIndex(std::size_t num_outcomes, const std::vector<Message>& messages);

    std::size_t size() const { return pairs_.size(); }
    const std::vector<IncidencePair>& pairs() const { return pairs_; }
    const IncidencePair& pair(std::size_t i) const { return pairs_[i]; }
    const std::vector<std::size_t>& of_outcome(std::size_t x) const { return by_outcome_[x]; }
    const std::vector<std::size_t>& of_message(std::size_t y) const { return by_message_[y]; }
    std::optional<std::size_t> find(std::size_t x, std::size_t y) const;

private:
    std::vector<IncidencePair> pairs_;
    std::vector<std::vector<std::size_t>> by_outcome_;
    std::vector<std::vector<std::size_t>> by_message_;
};

class Game {
public:
    const std::vector<std::string>& outcomes() const { return outcomes_; }
    const std::vector<Message>& messages() const { return messages_; }
    const Message& message(std::size_t y) const { return messages_[y]; }
    const std::vector<double>& marginal() const { return marginal_; }
    const LossSpec& loss() const { return loss_; }
    const IncidenceIndex& incidence() const { return incidence_; }
    std::size_t num_outcomes() const { return outcomes_.size(); }
    std::size_t num_messages() const { return messages_.size(); }
    std::optional<std::size_t> outcome_index(const std::string& name) const;

    Game with_loss(LossSpec loss) const;
    Game with_marginal(std::vector<double> marginal, const Tolerances& tol = default_tolerances()) const;

private:
    friend Game validate_game(RawGame raw, const Tolerances& tol);

    std::vector<std::string> outcomes_;
    std::vector<Message> messages_;
    std::vector<double> marginal_;
    LossSpec loss_;
    IncidenceIndex incidence_;
};

// Sorts each message; rejects empty, duplicate or out-of-range messages, uncovered outcomes,
// nonpositive or unnormalized marginals and malformed losses.
Game validate_game(RawGame raw, const Tolerances& tol = default_tolerances());

// Joint P(x, y) indexed by incidence pair.
struct QuizStrategy {
    std::vector<double> joint;
};

// Q_y as a distribution over all outcomes, one per message.
struct ContestantStrategy {
    std::vector<std::vector<double>> per_message;
};

struct KtVector {
    std::vector<double> lambda;
};

struct RcarVector {
    std::vector<double> q;
};

// Throws InvalidStrategy when entries are negative or row sums miss p_x by more than tol.feasibility.
QuizStrategy make_quiz_strategy(const Game& game, std::vector<double> joint,
                                const Tolerances& tol = default_tolerances());
// Built from a dense table P[y][x]; entries with x not in y must be zero.
QuizStrategy quiz_strategy_from_table(const Game& game, const std::vector<std::vector<double>>& table,
                                      const Tolerances& tol = default_tolerances());
std::vector<std::vector<double>> strategy_table(const Game& game, const QuizStrategy& p);

void validate_contestant(const Game& game, const ContestantStrategy& q,
                         const Tolerances& tol = default_tolerances());
void validate_rcar(const Game& game, const RcarVector& q, const Tolerances& tol = default_tolerances());

double joint_at(const Game& game, const QuizStrategy& p, std::size_t x, std::size_t y);
double message_mass(const Game& game, const QuizStrategy& p, std::size_t y);
std::vector<double> message_masses(const Game& game, const QuizStrategy& p);
// P(. | y) over all outcomes; throws ZeroMassMessage when P(y) = 0.
std::vector<double> conditional(const Game& game, const QuizStrategy& p, std::size_t y);

// Terms with P(x, y) = 0 are skipped, so an infinite loss there contributes nothing.
double expected_loss(const Game& game, const QuizStrategy& p, const ContestantStrategy& q);
double expected_entropy(const Game& game, const QuizStrategy& p);
double worst_case_loss(const Game& game, const ContestantStrategy& q);

}  // namespace rpu
