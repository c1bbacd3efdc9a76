#include "rpu/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "lp.hpp"
#include "perspective.hpp"
#include "rpu/errors.hpp"
#include "rpu/verify.hpp"
#include "simplex_search.hpp"

namespace rpu::solver {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Blocks {
    std::vector<std::vector<std::size_t>> outcomes;  // per message
    std::vector<std::size_t> first;                  // first pair index per message (pairs are contiguous)
    std::vector<std::size_t> pair_outcome;
};

Blocks make_blocks(const Game& game) {
    Blocks b;
    const auto& inc = game.incidence();
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        b.outcomes.push_back(game.message(y));
        b.first.push_back(inc.of_message(y).front());
    }
    for (const auto& pr : inc.pairs()) b.pair_outcome.push_back(pr.outcome);
    return b;
}

double total_phi(const LossSpec& spec, const Blocks& b, const std::vector<double>& z,
                 std::vector<double>& scratch) {
    double s = 0.0;
    for (std::size_t y = 0; y < b.outcomes.size(); ++y)
        s += detail::message_phi(spec, b.outcomes[y], z.data() + b.first[y], scratch);
    return s;
}

std::vector<double> initial_point(const Game& game, std::mt19937_64* rng) {
    std::vector<double> z(game.incidence().size(), 0.0);
    std::uniform_real_distribution<double> u(0.5, 1.5);
    for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
        const auto& idx = game.incidence().of_outcome(x);
        std::vector<double> w(idx.size(), 1.0);
        if (rng)
            for (double& v : w) v = u(*rng);
        double s = std::accumulate(w.begin(), w.end(), 0.0);
        for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = game.marginal()[x] * w[k] / s;
    }
    return z;
}

void fix_rows(const Game& game, std::vector<double>& z) {
    for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
        double s = 0.0;
        for (std::size_t i : game.incidence().of_outcome(x)) {
            z[i] = std::max(z[i], 0.0);
            s += z[i];
        }
        for (std::size_t i : game.incidence().of_outcome(x)) z[i] *= game.marginal()[x] / s;
    }
}

struct BarrierResult {
    std::vector<double> z;
    std::vector<double> nu;
    std::vector<double> trace;
    std::size_t iterations = 0;
    double mu = 0.0;
    double value = 0.0;
};

// Path-following on phi_total(z) + mu * sum log z over the product of outcome simplices.
BarrierResult barrier_solve(const Game& game, const Blocks& b, std::vector<double> z, std::size_t budget) {
    const LossSpec& spec = game.loss();
    const std::size_t n = z.size();
    const std::size_t m = game.num_outcomes();
    const double scale = losses::affine_scale(spec);
    std::vector<double> scratch(m, 0.0);
    std::vector<Eigen::MatrixXd> minv(b.outcomes.size());
    std::vector<double> grad(n), rhs(n), dz(n), trial(n);
    Eigen::MatrixXd hess;
    Eigen::VectorXd nu = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));

    BarrierResult out;
    auto f_mu = [&](const std::vector<double>& v, double mu) {
        double s = total_phi(spec, b, v, scratch);
        for (double x : v) s += mu * std::log(x);
        return s;
    };

    double mu = 0.1 * scale;
    const double mu_min = 1e-12 * scale;
    while (true) {
        double prev_dec2 = kInf;
        for (int it = 0; it < 80 && out.iterations < budget; ++it) {
            ++out.iterations;
            Eigen::MatrixXd S = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
            Eigen::VectorXd r = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
            for (std::size_t y = 0; y < b.outcomes.size(); ++y) {
                const double* v = z.data() + b.first[y];
                const auto d = static_cast<Eigen::Index>(b.outcomes[y].size());
                detail::message_gradient(spec, b.outcomes[y], v, grad.data() + b.first[y]);
                detail::message_hessian(spec, b.outcomes[y], v, hess);
                Eigen::MatrixXd M = -hess;
                for (Eigen::Index k = 0; k < d; ++k) {
                    grad[b.first[y] + k] += mu / v[k];
                    M(k, k) += mu / (v[k] * v[k]);
                }
                Eigen::LLT<Eigen::MatrixXd> llt(M);
                if (llt.info() != Eigen::Success) {
                    M += 1e-14 * M.diagonal().cwiseAbs().maxCoeff() * Eigen::MatrixXd::Identity(d, d);
                    llt.compute(M);
                }
                minv[y] = llt.solve(Eigen::MatrixXd::Identity(d, d));
                for (Eigen::Index i = 0; i < d; ++i) {
                    std::size_t xi = b.outcomes[y][i];
                    for (Eigen::Index j = 0; j < d; ++j) {
                        S(xi, b.outcomes[y][j]) += minv[y](i, j);
                        r(xi) += minv[y](i, j) * grad[b.first[y] + j];
                    }
                }
            }
            nu = S.ldlt().solve(r);
            double dec2 = 0.0;
            for (std::size_t y = 0; y < b.outcomes.size(); ++y) {
                const auto d = static_cast<Eigen::Index>(b.outcomes[y].size());
                for (Eigen::Index i = 0; i < d; ++i) {
                    std::size_t pi = b.first[y] + i;
                    rhs[pi] = grad[pi] - nu(b.outcomes[y][i]);
                }
                for (Eigen::Index i = 0; i < d; ++i) {
                    double s = 0.0;
                    for (Eigen::Index j = 0; j < d; ++j) s += minv[y](i, j) * rhs[b.first[y] + j];
                    dz[b.first[y] + i] = s;
                }
            }
            for (std::size_t i = 0; i < n; ++i) dec2 += dz[i] * rhs[i];
            // centered enough that the entropy is within 1e-5 * n * mu of the central path
            const double centered = 1e-10 * mu * static_cast<double>(n);
            if (dec2 < centered || dec2 < 1e-24 * scale) break;
            double t = 1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (dz[i] < 0.0) t = std::min(t, -0.995 * z[i] / dz[i]);
            // once the predicted gain is below rounding in f_mu the step is taken unchecked
            const double f0 = f_mu(z, mu);
            const double slack = 1e-13 * (std::abs(f0) + scale);
            bool accepted = false;
            for (int tries = 0; tries < 60; ++tries) {
                for (std::size_t i = 0; i < n; ++i) trial[i] = z[i] + t * dz[i];
                if (dec2 < slack || f_mu(trial, mu) >= f0 + 0.1 * t * dec2) {
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
            if (!accepted) break;
            z = trial;
            fix_rows(game, z);
            // at the rounding floor dec2 stops contracting
            if (dec2 < 1e4 * centered && dec2 > 0.25 * prev_dec2) break;
            prev_dec2 = dec2;
        }
        out.trace.push_back(total_phi(spec, b, z, scratch));
        if (mu <= mu_min || out.iterations >= budget) break;
        mu *= 0.1;
    }
    out.mu = mu;
    out.z = std::move(z);
    out.nu.assign(nu.data(), nu.data() + nu.size());
    out.value = out.trace.back();
    return out;
}

struct PolishResult {
    bool ok = false;
    std::vector<double> z;
    double residual = kInf;
};

// Newton on the stationarity system restricted to the support read off a barrier point:
// gradient = lambda_x on supported pairs, rows summing to p_x, everything else held at zero.
PolishResult polish(const Game& game, const Blocks& b, const std::vector<double>& z0, double cut) {
    const LossSpec& spec = game.loss();
    const std::size_t n = z0.size();
    const std::size_t m = game.num_outcomes();
    std::vector<std::size_t> support;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (z0[i] > cut * game.marginal()[b.pair_outcome[i]]) {
            slot[i] = static_cast<long>(support.size());
            support.push_back(i);
        }
    }
    const std::size_t s = support.size();
    std::vector<double> z(n, 0.0);
    for (std::size_t i : support) z[i] = z0[i];
    std::vector<double> grad(n, 0.0);
    Eigen::MatrixXd hess;

    auto eval = [&](const std::vector<double>& v, const Eigen::VectorXd& lam, Eigen::VectorXd& f) {
        f.setZero(static_cast<Eigen::Index>(s + m));
        for (std::size_t y = 0; y < b.outcomes.size(); ++y) {
            double mass = 0.0;
            for (std::size_t k = 0; k < b.outcomes[y].size(); ++k) mass += v[b.first[y] + k];
            if (mass > 0.0) detail::message_gradient(spec, b.outcomes[y], v.data() + b.first[y], grad.data() + b.first[y]);
        }
        for (std::size_t k = 0; k < s; ++k) {
            std::size_t i = support[k];
            f(k) = grad[i] - lam(b.pair_outcome[i]);
            f(s + b.pair_outcome[i]) += v[i];
        }
        for (std::size_t x = 0; x < m; ++x) f(s + x) -= game.marginal()[x];
        return f.lpNorm<Eigen::Infinity>();
    };

    Eigen::VectorXd lam = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    {
        std::vector<double> cnt(m, 0.0);
        Eigen::VectorXd f;
        eval(z, lam, f);
        for (std::size_t i : support) {
            lam(b.pair_outcome[i]) += grad[i];
            cnt[b.pair_outcome[i]] += 1.0;
        }
        for (std::size_t x = 0; x < m; ++x) {
            if (cnt[x] == 0.0) return {};
            lam(x) /= cnt[x];
        }
    }

    Eigen::VectorXd f, f_try;
    double res = eval(z, lam, f);
    for (int it = 0; it < 60 && res > 1e-15; ++it) {
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(s + m), static_cast<Eigen::Index>(s + m));
        for (std::size_t y = 0; y < b.outcomes.size(); ++y) {
            const auto d = b.outcomes[y].size();
            bool any = false;
            for (std::size_t k = 0; k < d; ++k) any = any || slot[b.first[y] + k] >= 0;
            if (!any) continue;
            detail::message_hessian(spec, b.outcomes[y], z.data() + b.first[y], hess);
            for (std::size_t i = 0; i < d; ++i) {
                long si = slot[b.first[y] + i];
                if (si < 0) continue;
                for (std::size_t j = 0; j < d; ++j) {
                    long sj = slot[b.first[y] + j];
                    if (sj >= 0) J(si, sj) = hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                }
            }
        }
        for (std::size_t k = 0; k < s; ++k) {
            std::size_t x = b.pair_outcome[support[k]];
            J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s + x)) = -1.0;
            J(static_cast<Eigen::Index>(s + x), static_cast<Eigen::Index>(k)) = 1.0;
        }
        Eigen::VectorXd delta = J.completeOrthogonalDecomposition().solve(-f);
        double t = 1.0;
        bool moved = false;
        for (int tries = 0; tries < 30; ++tries, t *= 0.5) {
            std::vector<double> zt = z;
            bool positive = true;
            for (std::size_t k = 0; k < s; ++k) {
                zt[support[k]] += t * delta(static_cast<Eigen::Index>(k));
                if (!(zt[support[k]] > 0.0)) positive = false;
            }
            if (!positive) continue;
            Eigen::VectorXd lt = lam + t * delta.tail(static_cast<Eigen::Index>(m));
            double r = eval(zt, lt, f_try);
            if (r < res) {
                z = std::move(zt);
                lam = lt;
                res = r;
                f = f_try;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    PolishResult out;
    out.residual = res;
    out.z = z;
    out.ok = res < 1e-10;
    if (!out.ok) return out;
    // pairs held at zero inside used messages must not want mass
    eval(z, lam, f);
    for (std::size_t y = 0; y < b.outcomes.size(); ++y) {
        double mass = 0.0;
        for (std::size_t k = 0; k < b.outcomes[y].size(); ++k) mass += z[b.first[y] + k];
        if (!(mass > 0.0)) continue;
        for (std::size_t k = 0; k < b.outcomes[y].size(); ++k) {
            std::size_t i = b.first[y] + k;
            if (slot[i] < 0 && !(grad[i] <= lam(b.pair_outcome[i]) + 1e-9)) out.ok = false;
        }
    }
    return out;
}

// lambda_x = max over used y containing x of L(x, P(. | y)).
KtVector candidate_kt(const Game& game, const QuizStrategy& p, double used_threshold) {
    std::vector<double> lambda(game.num_outcomes(), -kInf);
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        if (!(message_mass(game, p, y) > used_threshold)) continue;
        auto c = conditional(game, p, y);
        for (std::size_t x : game.message(y)) lambda[x] = std::max(lambda[x], losses::loss(game.loss(), x, c));
    }
    return KtVector{lambda};
}

void finish(const Game& game, const SolverOptions& options, SolveReport& report) {
    report.value = expected_entropy(game, report.strategy);
    auto cert = verify::check_kt(game, report.strategy, report.kt, options.certificate_tolerance);
    report.residuals["kt_violation"] = cert.max_violation;
    double feas = 0.0;
    for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
        double s = 0.0;
        for (std::size_t i : game.incidence().of_outcome(x)) s += report.strategy.joint[i];
        feas = std::max(feas, std::abs(s - game.marginal()[x]));
    }
    report.residuals["feasibility"] = feas;
    double dual = 0.0;
    for (std::size_t x = 0; x < game.num_outcomes(); ++x) dual += game.marginal()[x] * report.kt.lambda[x];
    report.residuals["duality_gap"] = dual - report.value;
    report.converged = cert.passed && feas <= 1e-9 && std::abs(dual - report.value) <= options.certificate_tolerance;
}

SolveReport solve_smooth(const Game& game, const SolverOptions& options) {
    Blocks b = make_blocks(game);
    std::mt19937_64 rng(options.seed);
    const std::size_t runs = std::max<std::size_t>(1, options.restarts);
    const std::size_t budget = options.max_iterations;
    BarrierResult best;
    bool have = false;
    std::size_t used = 0;
    for (std::size_t r = 0; r < runs && used < budget; ++r) {
        auto z0 = initial_point(game, r == 0 ? nullptr : &rng);
        auto res = barrier_solve(game, b, z0, budget - used);
        used += res.iterations;
        if (!have || res.value > best.value) {
            best = std::move(res);
            have = true;
        }
    }
    SolveReport report;
    report.method = "interior-point";
    report.iterations = used;
    report.trace = best.trace;
    report.residuals["barrier_mu"] = best.mu;

    // degenerate zeros leave the boundary like sqrt(mu), so a single support cut can misread them
    PolishResult pol;
    for (double cut : {1e-7, 1e-5, 1e-3}) {
        pol = polish(game, b, best.z, cut);
        if (pol.ok) break;
    }
    report.residuals["polish_residual"] = pol.residual;
    std::vector<double> z = pol.ok ? pol.z : best.z;
    fix_rows(game, z);
    report.strategy = QuizStrategy{z};
    double polished = expected_entropy(game, report.strategy);
    if (pol.ok) report.trace.push_back(polished);
    report.kt = candidate_kt(game, report.strategy, options.smoothing_epsilon);
    finish(game, options, report);
    return report;
}

SolveReport solve_linear(const Game& game, const SolverOptions& options) {
    const LossSpec spec = losses::randomized_counterpart(game.loss());
    const std::size_t n = game.incidence().size();
    const std::size_t m = game.num_outcomes();
    const std::size_t ny = game.num_messages();
    const auto a = losses::decision_matrix(spec, m);
    const double scale = losses::affine_scale(spec);

    detail::LinearProgram lp;
    lp.num_vars = n + ny;
    lp.cost.assign(n + ny, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        lp.cost[i] = -losses::affine_offset(spec, game.incidence().pair(i).outcome);
    for (std::size_t y = 0; y < ny; ++y) lp.cost[n + y] = -1.0;
    // t_y <= scale * sum_{x in y} A[x][x'] P(x, y) for every prediction x'
    for (std::size_t y = 0; y < ny; ++y) {
        for (std::size_t xp = 0; xp < m; ++xp) {
            std::vector<std::pair<std::size_t, double>> terms{{n + y, 1.0}};
            for (std::size_t i : game.incidence().of_message(y)) {
                double c = scale * a[game.incidence().pair(i).outcome][xp];
                if (c != 0.0) terms.emplace_back(i, -c);
            }
            lp.add_row(std::move(terms), 0.0, false);
        }
    }
    std::vector<std::size_t> marginal_row(m);
    for (std::size_t x = 0; x < m; ++x) {
        std::vector<std::pair<std::size_t, double>> terms;
        for (std::size_t i : game.incidence().of_outcome(x)) terms.emplace_back(i, 1.0);
        marginal_row[x] = lp.add_row(std::move(terms), game.marginal()[x], true);
    }
    auto sol = detail::solve_lp(lp, options.max_iterations);

    SolveReport report;
    report.method = "linear-program";
    report.iterations = sol.pivots;
    if (sol.status != detail::LpStatus::Optimal) {
        report.strategy = QuizStrategy{initial_point(game, nullptr)};
        report.kt = KtVector{std::vector<double>(m, 0.0)};
        report.value = expected_entropy(game, report.strategy);
        report.converged = false;
        report.residuals["lp_status"] = static_cast<double>(sol.status);
        return report;
    }
    std::vector<double> z(sol.x.begin(), sol.x.begin() + static_cast<long>(n));
    fix_rows(game, z);
    report.strategy = QuizStrategy{z};
    std::vector<double> lambda(m);
    for (std::size_t x = 0; x < m; ++x) lambda[x] = -sol.duals[marginal_row[x]];
    report.kt = KtVector{lambda};
    finish(game, options, report);
    report.trace = {report.value};
    return report;
}

}  // namespace

SolveReport solve_quizmaster(const Game& game, const SolverOptions& options) {
    if (losses::is_piecewise_linear(game.loss())) return solve_linear(game, options);
    return solve_smooth(game, options);
}

RcarResult solve_rcar(const Game& game, const SolverOptions& options) {
    Game lg = game.with_loss(LossSpec::of(LossKind::Logarithmic));
    SolveReport report = solve_quizmaster(lg, options);
    const std::size_t m = lg.num_outcomes();
    std::vector<double> q(m, 0.0);
    for (std::size_t x = 0; x < m; ++x) {
        double num = 0.0, den = 0.0;
        for (std::size_t i : lg.incidence().of_outcome(x)) {
            std::size_t y = lg.incidence().pair(i).message;
            double mass = message_mass(lg, report.strategy, y);
            if (!(mass > options.smoothing_epsilon) || report.strategy.joint[i] <= 0.0) continue;
            num += report.strategy.joint[i] * (report.strategy.joint[i] / mass);
            den += report.strategy.joint[i];
        }
        q[x] = den > 0.0 ? num / den : std::exp(-report.kt.lambda[x]);
    }
    RcarVector rq{q};
    auto cert = verify::check_rcar(lg, report.strategy, rq, options.certificate_tolerance);
    report.residuals["rcar_violation"] = cert.max_violation;
    if (!report.converged || !cert.passed)
        throw Error(ErrorCode::DidNotConverge,
                    "RCAR conditions not certified (violation " + std::to_string(cert.max_violation) + ")");
    return RcarResult{rq, std::move(report)};
}

namespace {

std::vector<double> linear_response(const Game& game, const KtVector& lambda, std::size_t y, double tol) {
    const LossSpec spec = losses::randomized_counterpart(game.loss());
    const std::size_t m = game.num_outcomes();
    const auto a = losses::decision_matrix(spec, m);
    const double scale = losses::affine_scale(spec);
    // Q over X (columns 0..m-1), slack s = s_plus - s_minus
    detail::LinearProgram lp;
    lp.num_vars = m + 2;
    lp.cost.assign(m + 2, 0.0);
    lp.cost[m] = 1.0;
    lp.cost[m + 1] = -1.0;
    for (std::size_t x : game.message(y)) {
        std::vector<std::pair<std::size_t, double>> terms;
        for (std::size_t xp = 0; xp < m; ++xp)
            if (a[x][xp] != 0.0) terms.emplace_back(xp, scale * a[x][xp]);
        terms.emplace_back(m, -1.0);
        terms.emplace_back(m + 1, 1.0);
        lp.add_row(std::move(terms), lambda.lambda[x] - losses::affine_offset(spec, x), false);
    }
    std::vector<std::pair<std::size_t, double>> simplex;
    for (std::size_t xp = 0; xp < m; ++xp) simplex.emplace_back(xp, 1.0);
    lp.add_row(std::move(simplex), 1.0, true);
    auto sol = detail::solve_lp(lp);
    if (sol.status != detail::LpStatus::Optimal)
        throw Error(ErrorCode::NoFeasibleResponse, "response program failed on message " + std::to_string(y + 1));
    double slack = sol.x[m] - sol.x[m + 1];
    if (slack > tol)
        throw Error(ErrorCode::NoFeasibleResponse,
                    "message " + std::to_string(y + 1) + " needs slack " + std::to_string(slack));
    std::vector<double> q(sol.x.begin(), sol.x.begin() + static_cast<long>(m));
    for (double& v : q) v = std::max(v, 0.0);
    double s = std::accumulate(q.begin(), q.end(), 0.0);
    for (double& v : q) v /= s;
    return q;
}

std::vector<double> hard_response(const Game& game, const KtVector& lambda, std::size_t y, double tol) {
    const std::size_t m = game.num_outcomes();
    double best = kInf;
    std::size_t arg = 0;
    std::vector<double> e(m, 0.0);
    for (std::size_t xp = 0; xp < m; ++xp) {
        std::fill(e.begin(), e.end(), 0.0);
        e[xp] = 1.0;
        double worst = -kInf;
        for (std::size_t x : game.message(y)) worst = std::max(worst, losses::loss(game.loss(), x, e) - lambda.lambda[x]);
        if (worst < best) {
            best = worst;
            arg = xp;
        }
    }
    if (best > tol)
        throw Error(ErrorCode::NoFeasibleResponse,
                    "no pure prediction meets the hyperplane on message " + std::to_string(y + 1));
    std::fill(e.begin(), e.end(), 0.0);
    e[arg] = 1.0;
    return e;
}

}  // namespace

ContestantStrategy solve_contestant(const Game& game, const SolveReport& report, const SolverOptions& options) {
    const LossSpec& spec = game.loss();
    const double tol = options.certificate_tolerance;
    ContestantStrategy q;
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        std::vector<double> resp;
        if (losses::is_hard(spec)) {
            resp = hard_response(game, report.kt, y, tol);
        } else if (losses::is_piecewise_linear(spec)) {
            resp = linear_response(game, report.kt, y, tol);
        } else {
            if (message_mass(game, report.strategy, y) > options.smoothing_epsilon)
                resp = conditional(game, report.strategy, y);
            else
                resp = detail::max_gap_point(spec, game.message(y), report.kt.lambda, game.num_outcomes());
            double worst = -kInf;
            for (std::size_t x : game.message(y))
                worst = std::max(worst, losses::loss(spec, x, resp) - report.kt.lambda[x]);
            if (worst > tol)
                throw Error(ErrorCode::NoFeasibleResponse,
                            "message " + std::to_string(y + 1) + " needs slack " + std::to_string(worst));
        }
        q.per_message.push_back(std::move(resp));
    }
    return q;
}

namespace {

struct StableSearch {
    std::size_t n;
    std::vector<std::uint64_t> adj;
    std::vector<double> w;
    double best = -1.0;
    std::uint64_t best_set = 0;

    void run(std::uint64_t cand, std::uint64_t chosen, double weight) {
        if (cand == 0) {
            if (weight > best) {
                best = weight;
                best_set = chosen;
            }
            return;
        }
        double bound = weight;
        for (std::size_t v = 0; v < n; ++v)
            if (cand >> v & 1u) bound += w[v];
        if (bound <= best) return;
        std::size_t v = 0;
        double heaviest = -1.0;
        for (std::size_t u = 0; u < n; ++u) {
            if ((cand >> u & 1u) && w[u] > heaviest) {
                heaviest = w[u];
                v = u;
            }
        }
        const std::uint64_t bit = std::uint64_t{1} << v;
        run(cand & ~bit & ~adj[v], chosen | bit, weight + w[v]);
        run(cand & ~bit, chosen, weight);
    }
};

}  // namespace

StableSetResult solve_hard01_contestant(const Game& game) {
    if (game.loss().kind != LossKind::Hard01 || game.loss().affine)
        throw Error(ErrorCode::UnsupportedLoss, "stable-set contestant needs plain hard01 loss");
    const std::size_t n = game.num_outcomes();
    if (n > 30) throw Error(ErrorCode::TooLarge, "stable-set search is limited to 30 outcomes");
    StableSearch s{n, std::vector<std::uint64_t>(n, 0), game.marginal()};
    for (const auto& m : game.messages())
        for (std::size_t a : m)
            for (std::size_t b : m)
                if (a != b) s.adj[a] |= std::uint64_t{1} << b;
    s.run((std::uint64_t{1} << n) - 1, 0, 0.0);

    StableSetResult r;
    for (std::size_t x = 0; x < n; ++x)
        if (s.best_set >> x & 1u) r.stable_set.push_back(x);
    r.weight = s.best;
    for (const auto& m : game.messages()) {
        std::vector<double> q(n, 0.0);
        std::size_t pick = m.front();
        for (std::size_t x : m)
            if (s.best_set >> x & 1u) pick = x;
        q[pick] = 1.0;
        r.strategy.per_message.push_back(std::move(q));
    }
    r.worst_case = worst_case_loss(game, r.strategy);
    return r;
}

OracleResult oracle_grid(const Game& game, std::size_t resolution) {
    if (resolution == 0) throw Error(ErrorCode::TooLarge, "resolution must be positive");
    const LossSpec& spec = game.loss();
    const auto& inc = game.incidence();
    const std::size_t m = game.num_outcomes();
    const double r = static_cast<double>(resolution);
    Blocks b = make_blocks(game);

    std::vector<std::size_t> free;
    for (std::size_t x = 0; x < m; ++x)
        if (inc.of_outcome(x).size() >= 2) free.push_back(x);

    std::vector<double> z(inc.size(), 0.0);
    for (std::size_t x = 0; x < m; ++x)
        if (inc.of_outcome(x).size() == 1) z[inc.of_outcome(x).front()] = game.marginal()[x];

    std::vector<double> scratch(m, 0.0);
    std::vector<double> phi(game.num_messages(), 0.0);
    auto refresh = [&](std::size_t y) {
        phi[y] = detail::message_phi(spec, b.outcomes[y], z.data() + b.first[y], scratch);
    };

    OracleResult out;
    out.value = -kInf;
    if (free.empty()) {
        out.strategy = QuizStrategy{z};
        out.value = total_phi(spec, b, z, scratch);
        out.grid_points = 1.0;
        return out;
    }

    double count = 1.0;
    for (std::size_t k = 0; k + 1 < free.size(); ++k)
        count *= detail::simplex_grid_size(inc.of_outcome(free[k]).size(), resolution);
    const std::size_t dlast = inc.of_outcome(free.back()).size();
    count *= detail::simplex_grid_size(dlast - 1, resolution);
    if (count > 1e7) throw Error(ErrorCode::TooLarge, "grid has " + std::to_string(count) + " enumerated points");
    out.grid_points = count;

    for (std::size_t y = 0; y < game.num_messages(); ++y) refresh(y);

    auto set_row = [&](std::size_t x, const std::vector<std::size_t>& k) {
        const auto& idx = inc.of_outcome(x);
        for (std::size_t j = 0; j < idx.size(); ++j) {
            z[idx[j]] = static_cast<double>(k[j]) / r * game.marginal()[x];
        }
        for (std::size_t i : idx) refresh(inc.pair(i).message);
    };

    std::size_t warm = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t level) {
        if (level + 1 < free.size()) {
            const std::size_t x = free[level];
            detail::for_each_composition(inc.of_outcome(x).size(), resolution, [&](const std::vector<std::size_t>& k) {
                set_row(x, k);
                rec(level + 1);
                return true;
            });
            return;
        }
        const std::size_t x = free.back();
        const auto& idx = inc.of_outcome(x);
        const std::size_t ia = idx[dlast - 2], ib = idx[dlast - 1];
        const std::size_t ya = inc.pair(ia).message, yb = inc.pair(ib).message;
        const double px = game.marginal()[x];
        // the first dlast-2 coordinates are enumerated, the rest R is split between ia and ib
        detail::for_each_composition(dlast - 1, resolution, [&](const std::vector<std::size_t>& k) {
            for (std::size_t j = 0; j + 2 < dlast; ++j) z[idx[j]] = static_cast<double>(k[j]) / r * px;
            for (std::size_t j = 0; j + 2 < dlast; ++j) refresh(inc.pair(idx[j]).message);
            const std::size_t R = k[dlast - 2];
            double rest = 0.0;
            for (std::size_t y = 0; y < phi.size(); ++y)
                if (y != ya && y != yb) rest += phi[y];
            auto line = [&](std::size_t t) {
                z[ia] = static_cast<double>(t) / r * px;
                z[ib] = static_cast<double>(R - t) / r * px;
                return detail::message_phi(spec, b.outcomes[ya], z.data() + b.first[ya], scratch) +
                       detail::message_phi(spec, b.outcomes[yb], z.data() + b.first[yb], scratch);
            };
            // neighbouring grid points usually share the maximizer; otherwise bisect on differences
            std::size_t t = std::min(warm, R);
            double best = line(t);
            bool peak = (t == R || line(t + 1) <= best) && (t == 0 || line(t - 1) <= best);
            if (!peak) {
                std::size_t lo = 0, hi = R;
                while (lo < hi) {
                    std::size_t mid = (lo + hi) / 2;
                    if (line(mid) < line(mid + 1)) lo = mid + 1;
                    else hi = mid;
                }
                t = lo;
            }
            warm = t;
            best = line(t);
            double v = rest + best;
            if (v > out.value) {
                out.value = v;
                out.strategy = QuizStrategy{z};
            }
            return true;
        });
    };
    rec(0);
    return out;
}

}  // namespace rpu::solver
