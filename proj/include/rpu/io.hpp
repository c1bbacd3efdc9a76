#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rpu/game.hpp"
#include "rpu/solver.hpp"
#include "rpu/verify.hpp"

namespace rpu::io {

using nlohmann::json;

// "1/3", "0.25" or a JSON number.
double parse_probability(const json& value);

LossSpec parse_loss(const json& value, std::size_t num_outcomes);
json loss_to_json(const LossSpec& spec);

// Accepts a game object or a report carrying one under "game". Decimal marginals within 1e-9 of
// summing to one are rescaled; anything further off is rejected.
Game parse_game(const json& doc);
Game parse_game_text(const std::string& text, const std::string& origin = "<input>");
Game load_game(const std::string& path);
json game_to_json(const Game& game);

// Rows are messages, columns outcomes, null where x is not in y.
json strategy_to_json(const Game& game, const QuizStrategy& p);
QuizStrategy strategy_from_json(const Game& game, const json& rows);
json contestant_to_json(const Game& game, const ContestantStrategy& q);
ContestantStrategy contestant_from_json(const Game& game, const json& rows);

json report_to_json(const Game& game, const solver::SolveReport& report);
json certificate_to_json(const Game& game, const verify::CertificateReport& cert);

// Messages as rows with '-' where x is not in y, marginal as the footer row.
std::string format_table(const Game& game, const std::vector<std::vector<double>>& rows,
                         const std::string& corner, int precision = 6);
std::string format_vector(const Game& game, const std::vector<double>& v, const std::string& label,
                          int precision = 6);

}  // namespace rpu::io
