#include "rpu/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "rpu/errors.hpp"

namespace rpu {

IncidenceIndex::IncidenceIndex(std::size_t num_outcomes, const std::vector<Message>& messages)
    : by_outcome_(num_outcomes), by_message_(messages.size()) {
    for (std::size_t y = 0; y < messages.size(); ++y) {
        for (std::size_t x : messages[y]) {
            std::size_t i = pairs_.size();
            pairs_.push_back({x, y});
            by_outcome_[x].push_back(i);
            by_message_[y].push_back(i);
        }
    }
}

std::optional<std::size_t> IncidenceIndex::find(std::size_t x, std::size_t y) const {
    for (std::size_t i : by_message_[y])
        if (pairs_[i].outcome == x) return i;
    return std::nullopt;
}

std::optional<std::size_t> Game::outcome_index(const std::string& name) const {
    auto it = std::find(outcomes_.begin(), outcomes_.end(), name);
    if (it == outcomes_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - outcomes_.begin());
}

Game Game::with_loss(LossSpec loss) const {
    validate_loss(loss, num_outcomes());
    Game g = *this;
    g.loss_ = std::move(loss);
    return g;
}

Game Game::with_marginal(std::vector<double> marginal, const Tolerances& tol) const {
    return validate_game(RawGame{outcomes_, messages_, std::move(marginal), loss_}, tol);
}

Game validate_game(RawGame raw, const Tolerances& tol) {
    const std::size_t n = raw.outcomes.size();
    if (n == 0) throw Error(ErrorCode::UncoveredOutcome, "game has no outcomes");
    {
        std::set<std::string> names;
        for (const auto& o : raw.outcomes)
            if (!names.insert(o).second) throw Error(ErrorCode::ParseError, "duplicate outcome '" + o + "'");
    }
    std::vector<bool> covered(n, false);
    std::set<Message> seen;
    for (std::size_t y = 0; y < raw.messages.size(); ++y) {
        Message& m = raw.messages[y];
        if (m.empty()) throw Error(ErrorCode::EmptyMessage, "message " + std::to_string(y + 1) + " is empty");
        std::sort(m.begin(), m.end());
        if (std::adjacent_find(m.begin(), m.end()) != m.end())
            throw Error(ErrorCode::ParseError, "message " + std::to_string(y + 1) + " repeats an outcome");
        for (std::size_t x : m) {
            if (x >= n) throw Error(ErrorCode::ParseError, "message " + std::to_string(y + 1) + " refers to an unknown outcome");
            covered[x] = true;
        }
        if (!seen.insert(m).second)
            throw Error(ErrorCode::DuplicateMessage, "message " + std::to_string(y + 1) + " appears twice");
    }
    for (std::size_t x = 0; x < n; ++x)
        if (!covered[x]) throw Error(ErrorCode::UncoveredOutcome, "outcome '" + raw.outcomes[x] + "' is in no message");
    if (raw.marginal.size() != n)
        throw Error(ErrorCode::MarginalNotNormalized, "marginal needs one entry per outcome");
    double sum = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        double v = raw.marginal[x];
        if (!std::isfinite(v) || !(v > 0.0))
            throw Error(ErrorCode::ZeroMarginal, "outcome '" + raw.outcomes[x] + "' has nonpositive probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol.marginal)
        throw Error(ErrorCode::MarginalNotNormalized, "marginal sums to " + std::to_string(sum));
    validate_loss(raw.loss, n);

    Game g;
    g.outcomes_ = std::move(raw.outcomes);
    g.messages_ = std::move(raw.messages);
    g.marginal_ = std::move(raw.marginal);
    g.loss_ = std::move(raw.loss);
    g.incidence_ = IncidenceIndex(n, g.messages_);
    return g;
}

QuizStrategy make_quiz_strategy(const Game& game, std::vector<double> joint, const Tolerances& tol) {
    const auto& inc = game.incidence();
    if (joint.size() != inc.size()) throw Error(ErrorCode::InvalidStrategy, "joint has the wrong number of entries");
    for (double v : joint)
        if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidStrategy, "joint entries must be nonnegative");
    for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
        double s = 0.0;
        for (std::size_t i : inc.of_outcome(x)) s += joint[i];
        if (std::abs(s - game.marginal()[x]) > tol.feasibility)
            throw Error(ErrorCode::InvalidStrategy, "row of outcome '" + game.outcomes()[x] + "' does not sum to its marginal");
    }
    return QuizStrategy{std::move(joint)};
}

QuizStrategy quiz_strategy_from_table(const Game& game, const std::vector<std::vector<double>>& table,
                                      const Tolerances& tol) {
    if (table.size() != game.num_messages()) throw Error(ErrorCode::InvalidStrategy, "table needs one row per message");
    std::vector<double> joint(game.incidence().size(), 0.0);
    for (std::size_t y = 0; y < table.size(); ++y) {
        if (table[y].size() != game.num_outcomes())
            throw Error(ErrorCode::InvalidStrategy, "table needs one column per outcome");
        for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
            auto i = game.incidence().find(x, y);
            if (i) joint[*i] = table[y][x];
            else if (table[y][x] != 0.0)
                throw Error(ErrorCode::InvalidStrategy, "mass on an outcome outside its message");
        }
    }
    return make_quiz_strategy(game, std::move(joint), tol);
}

std::vector<std::vector<double>> strategy_table(const Game& game, const QuizStrategy& p) {
    std::vector<std::vector<double>> t(game.num_messages(), std::vector<double>(game.num_outcomes(), 0.0));
    for (std::size_t i = 0; i < game.incidence().size(); ++i) {
        const auto& pr = game.incidence().pair(i);
        t[pr.message][pr.outcome] = p.joint[i];
    }
    return t;
}

void validate_contestant(const Game& game, const ContestantStrategy& q, const Tolerances& tol) {
    if (q.per_message.size() != game.num_messages())
        throw Error(ErrorCode::InvalidStrategy, "contestant strategy needs one distribution per message");
    for (const auto& d : q.per_message) {
        if (d.size() != game.num_outcomes())
            throw Error(ErrorCode::InvalidStrategy, "contestant distribution has the wrong length");
        double s = 0.0;
        for (double v : d) {
            if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::InvalidStrategy, "negative contestant probability");
            s += v;
        }
        if (std::abs(s - 1.0) > tol.feasibility) throw Error(ErrorCode::InvalidStrategy, "contestant distribution does not sum to 1");
    }
}

void validate_rcar(const Game& game, const RcarVector& q, const Tolerances& tol) {
    if (q.q.size() != game.num_outcomes()) throw Error(ErrorCode::InvalidStrategy, "RCAR vector has the wrong length");
    for (double v : q.q)
        if (!(v > 0.0) || v > 1.0) throw Error(ErrorCode::InvalidStrategy, "RCAR entries must lie in (0, 1]");
    for (const auto& m : game.messages()) {
        double s = 0.0;
        for (std::size_t x : m) s += q.q[x];
        if (s > 1.0 + tol.certificate) throw Error(ErrorCode::InvalidStrategy, "RCAR vector exceeds 1 on a message");
    }
}

double joint_at(const Game& game, const QuizStrategy& p, std::size_t x, std::size_t y) {
    auto i = game.incidence().find(x, y);
    return i ? p.joint[*i] : 0.0;
}

double message_mass(const Game& game, const QuizStrategy& p, std::size_t y) {
    double s = 0.0;
    for (std::size_t i : game.incidence().of_message(y)) s += p.joint[i];
    return s;
}

std::vector<double> message_masses(const Game& game, const QuizStrategy& p) {
    std::vector<double> m(game.num_messages());
    for (std::size_t y = 0; y < m.size(); ++y) m[y] = message_mass(game, p, y);
    return m;
}

std::vector<double> conditional(const Game& game, const QuizStrategy& p, std::size_t y) {
    double mass = message_mass(game, p, y);
    if (!(mass > 0.0)) throw Error(ErrorCode::ZeroMassMessage, "message " + std::to_string(y + 1) + " has zero mass");
    std::vector<double> c(game.num_outcomes(), 0.0);
    for (std::size_t i : game.incidence().of_message(y)) c[game.incidence().pair(i).outcome] = p.joint[i] / mass;
    return c;
}

double expected_loss(const Game& game, const QuizStrategy& p, const ContestantStrategy& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < game.incidence().size(); ++i) {
        if (p.joint[i] <= 0.0) continue;
        const auto& pr = game.incidence().pair(i);
        s += p.joint[i] * losses::loss(game.loss(), pr.outcome, q.per_message[pr.message]);
    }
    return s;
}

double expected_entropy(const Game& game, const QuizStrategy& p) {
    double s = 0.0;
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        double mass = message_mass(game, p, y);
        if (!(mass > 0.0)) continue;
        s += mass * losses::entropy(game.loss(), conditional(game, p, y));
    }
    return s;
}

double worst_case_loss(const Game& game, const ContestantStrategy& q) {
    double s = 0.0;
    for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::size_t i : game.incidence().of_outcome(x)) {
            std::size_t y = game.incidence().pair(i).message;
            worst = std::max(worst, losses::loss(game.loss(), x, q.per_message[y]));
        }
        s += game.marginal()[x] * worst;
    }
    return s;
}

}  // namespace rpu
