#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rpu/game.hpp"

namespace rpu::verify {

enum class MessageMode { Supporting, Dominating };

const char* mode_name(MessageMode mode);

struct MessageCertificate {
    MessageMode mode = MessageMode::Dominating;
    double violation = 0.0;
    std::vector<double> touch_point;  // conditional for used messages, worst grid point otherwise
};

struct CertificateReport {
    bool passed = false;
    double max_violation = 0.0;
    std::vector<MessageCertificate> per_message;
    std::vector<std::string> notes;
};

// For every message, H(P') <= sum_x P'(x) lambda_x on the message simplex, searched on a grid with
// local refinement; used messages must also meet equality at P(. | y).
CertificateReport check_kt(const Game& game, const QuizStrategy& p, const KtVector& lambda, double tol);

// q_x = P(x | y) on used messages and sum over every message at most 1.
CertificateReport check_rcar(const Game& game, const QuizStrategy& p, const RcarVector& q, double tol);

// worst_case_loss(Q) - expected_entropy(P); nonnegative up to rounding by weak duality.
double check_nash_gap(const Game& game, const QuizStrategy& p, const ContestantStrategy& q);

// L(x, P(. | y)) = lambda_x for every used message and x in it.
bool check_equalizer(const Game& game, const QuizStrategy& p, const KtVector& lambda, double tol);
// Every message variant: L(x, Q_y) = lambda_x for all y and x in y.
bool check_equalizer(const Game& game, const ContestantStrategy& q, const KtVector& lambda, double tol);

// For y1 \ y2 = {x1}, y2 \ y1 = {x2}, a loss symmetric between them and P(x1, y1) > 0,
// requires lambda_x1 <= lambda_x2 + tol.
CertificateReport check_loss_exchange(const Game& game, const QuizStrategy& p, const KtVector& lambda,
                                      double tol);

double brute_force_value(const Game& game, std::size_t resolution);

}  // namespace rpu::verify
