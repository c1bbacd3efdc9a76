#include "rpu/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rpu/solver.hpp"
#include "simplex_search.hpp"

namespace rpu::verify {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t kt_resolution(std::size_t d) {
    if (d <= 2) return 99999;
    if (d == 3) return detail::resolution_for_budget(3, 100000);
    if (d == 4) return 50;
    return detail::resolution_for_budget(d, 20000);
}

std::string message_label(std::size_t y) { return "y" + std::to_string(y + 1); }

}  // namespace

const char* mode_name(MessageMode mode) {
    return mode == MessageMode::Supporting ? "supporting" : "dominating";
}

CertificateReport check_kt(const Game& game, const QuizStrategy& p, const KtVector& lambda, double tol) {
    const std::size_t n = game.num_outcomes();
    const double support = default_tolerances().support;
    CertificateReport report;
    for (double l : lambda.lambda) {
        if (!std::isfinite(l)) {
            report.notes.push_back("KT vector has a non-finite entry");
            report.max_violation = kInf;
        }
    }
    std::vector<double> full(n, 0.0);
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        const Message& msg = game.message(y);
        const std::size_t d = msg.size();
        auto gap = [&](const std::vector<double>& w) {
            std::fill(full.begin(), full.end(), 0.0);
            double lin = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                full[msg[k]] = w[k];
                lin += lambda.lambda[msg[k]] * w[k];
            }
            return losses::entropy(game.loss(), full) - lin;
        };
        auto found = detail::maximize_on_simplex(d, gap, kt_resolution(d), 20);
        MessageCertificate mc;
        double violation = std::max(0.0, found.value);
        if (message_mass(game, p, y) > support) {
            mc.mode = MessageMode::Supporting;
            mc.touch_point = conditional(game, p, y);
            double lin = 0.0;
            for (std::size_t x : msg) lin += lambda.lambda[x] * mc.touch_point[x];
            double miss = std::abs(losses::entropy(game.loss(), mc.touch_point) - lin);
            if (miss > tol)
                report.notes.push_back(message_label(y) + ": hyperplane misses the conditional by " + std::to_string(miss));
            violation = std::max(violation, miss);
        } else {
            mc.mode = MessageMode::Dominating;
            mc.touch_point.assign(n, 0.0);
            for (std::size_t k = 0; k < d; ++k) mc.touch_point[msg[k]] = found.point[k];
        }
        if (found.value > tol)
            report.notes.push_back(message_label(y) + ": entropy exceeds the hyperplane by " + std::to_string(found.value));
        if (!std::isfinite(violation)) violation = kInf;
        mc.violation = violation;
        report.max_violation = std::max(report.max_violation, violation);
        report.per_message.push_back(std::move(mc));
    }
    report.passed = report.max_violation <= tol;
    return report;
}

CertificateReport check_rcar(const Game& game, const QuizStrategy& p, const RcarVector& q, double tol) {
    const double support = default_tolerances().support;
    CertificateReport report;
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        const Message& msg = game.message(y);
        MessageCertificate mc;
        double sum = 0.0;
        for (std::size_t x : msg) sum += q.q[x];
        double violation = std::max(0.0, sum - 1.0);
        if (violation > tol)
            report.notes.push_back(message_label(y) + ": q sums to " + std::to_string(sum));
        if (message_mass(game, p, y) > support) {
            mc.mode = MessageMode::Supporting;
            mc.touch_point = conditional(game, p, y);
            for (std::size_t x : msg) {
                double miss = std::abs(q.q[x] - mc.touch_point[x]);
                if (miss > tol)
                    report.notes.push_back(message_label(y) + ": P(" + game.outcomes()[x] + " | y) differs from q by " +
                                           std::to_string(miss));
                violation = std::max(violation, miss);
            }
        } else {
            mc.mode = MessageMode::Dominating;
        }
        mc.violation = violation;
        report.max_violation = std::max(report.max_violation, violation);
        report.per_message.push_back(std::move(mc));
    }
    report.passed = report.max_violation <= tol;
    return report;
}

double check_nash_gap(const Game& game, const QuizStrategy& p, const ContestantStrategy& q) {
    return worst_case_loss(game, q) - expected_entropy(game, p);
}

bool check_equalizer(const Game& game, const QuizStrategy& p, const KtVector& lambda, double tol) {
    const double support = default_tolerances().support;
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        if (!(message_mass(game, p, y) > support)) continue;
        auto c = conditional(game, p, y);
        for (std::size_t x : game.message(y))
            if (!(std::abs(losses::loss(game.loss(), x, c) - lambda.lambda[x]) <= tol)) return false;
    }
    return true;
}

bool check_equalizer(const Game& game, const ContestantStrategy& q, const KtVector& lambda, double tol) {
    for (std::size_t y = 0; y < game.num_messages(); ++y)
        for (std::size_t x : game.message(y))
            if (!(std::abs(losses::loss(game.loss(), x, q.per_message[y]) - lambda.lambda[x]) <= tol)) return false;
    return true;
}

CertificateReport check_loss_exchange(const Game& game, const QuizStrategy& p, const KtVector& lambda, double tol) {
    const double support = default_tolerances().support;
    CertificateReport report;
    report.per_message.resize(game.num_messages());
    const auto& ms = game.messages();
    for (std::size_t y1 = 0; y1 < ms.size(); ++y1) {
        for (std::size_t y2 = 0; y2 < ms.size(); ++y2) {
            if (y1 == y2) continue;
            Message only1, only2;
            std::set_difference(ms[y1].begin(), ms[y1].end(), ms[y2].begin(), ms[y2].end(), std::back_inserter(only1));
            std::set_difference(ms[y2].begin(), ms[y2].end(), ms[y1].begin(), ms[y1].end(), std::back_inserter(only2));
            if (only1.size() != 1 || only2.size() != 1) continue;
            const std::size_t x1 = only1.front(), x2 = only2.front();
            if (!losses::is_symmetric_between(game.loss(), x1, x2)) continue;
            if (!(joint_at(game, p, x1, y1) > support)) continue;
            double v = std::max(0.0, lambda.lambda[x1] - lambda.lambda[x2]);
            if (v > tol) {
                std::ostringstream os;
                os << message_label(y1) << "/" << message_label(y2) << ": lambda(" << game.outcomes()[x1]
                   << ") exceeds lambda(" << game.outcomes()[x2] << ") by " << v;
                report.notes.push_back(os.str());
            }
            auto& mc = report.per_message[y1];
            mc.violation = std::max(mc.violation, v);
            report.max_violation = std::max(report.max_violation, v);
        }
    }
    report.passed = report.max_violation <= tol;
    return report;
}

double brute_force_value(const Game& game, std::size_t resolution) {
    return solver::oracle_grid(game, resolution).value;
}

}  // namespace rpu::verify
