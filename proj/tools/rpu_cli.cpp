#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rpu/errors.hpp"
#include "rpu/game.hpp"
#include "rpu/io.hpp"
#include "rpu/losses.hpp"
#include "rpu/solver.hpp"
#include "rpu/structure.hpp"
#include "rpu/verify.hpp"

namespace {

using rpu::io::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitFailure = 3;

struct Flags {
    std::string path;
    std::string loss;
    double tol = 1e-6;
    std::size_t restarts = 5;
    std::optional<std::uint64_t> seed;
    std::size_t resolution = 100;
    bool json_out = false;
    bool quiet = false;
};

class Printer {
public:
    explicit Printer(const Flags& f) : flags_(f) {}
    bool text() const { return !flags_.quiet && !flags_.json_out; }
    std::ostream& out() { return text() ? std::cout : sink_; }
    void emit(const json& j) {
        if (flags_.json_out && !flags_.quiet) std::cout << j.dump(2) << '\n';
    }

private:
    const Flags& flags_;
    std::ostringstream sink_;
};

std::uint64_t resolve_seed(const Flags& f) {
    if (f.seed) return *f.seed;
    if (const char* env = std::getenv("RPU_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw rpu::Error(rpu::ErrorCode::ParseError, std::string("RPU_SEED is not an integer: ") + env);
        }
    }
    return 0;
}

rpu::solver::SolverOptions options_from(const Flags& f) {
    rpu::solver::SolverOptions o;
    o.certificate_tolerance = f.tol;
    o.restarts = f.restarts;
    o.seed = resolve_seed(f);
    return o;
}

rpu::Game load(const Flags& f) {
    rpu::Game g = rpu::io::load_game(f.path);
    if (!f.loss.empty()) g = g.with_loss(rpu::LossSpec::of(rpu::parse_loss_kind(f.loss)));
    return g;
}

std::string fmt(double v, int precision = 6) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

std::string message_label(std::size_t y) { return "y" + std::to_string(y + 1); }

int cmd_validate(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    auto c = rpu::structure::classify(g);
    pr.out() << rpu::structure::summary_line(g, c) << '\n';
    pr.emit({{"valid", true}, {"summary", rpu::structure::summary_line(g, c)}});
    return kExitOk;
}

int cmd_solve(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    auto opts = options_from(f);
    auto report = rpu::solver::solve_quizmaster(g, opts);
    auto cert = rpu::verify::check_kt(g, report.strategy, report.kt, f.tol);

    json j;
    j["game"] = rpu::io::game_to_json(g);
    j["seed"] = opts.seed;
    j["report"] = rpu::io::report_to_json(g, report);
    j["certificate"] = rpu::io::certificate_to_json(g, cert);

    auto& os = pr.out();
    os << rpu::structure::summary_line(g, rpu::structure::classify(g)) << '\n';
    os << "loss: " << rpu::losses::describe(g.loss()) << '\n';
    os << "method: " << report.method << ", " << report.iterations << " iterations, "
       << (report.converged ? "converged" : "NOT converged") << "\n\n";
    os << rpu::io::format_table(g, rpu::strategy_table(g, report.strategy), "P*");
    os << rpu::io::format_vector(g, report.kt.lambda, "lambda*");
    os << "value: " << fmt(report.value, 9) << '\n';

    std::vector<std::string> notes;
    std::optional<rpu::ContestantStrategy> q;
    double minimax = std::nan("");
    if (g.loss().kind == rpu::LossKind::Hard01 && !g.loss().affine) {
        auto ss = rpu::solver::solve_hard01_contestant(g);
        q = ss.strategy;
        minimax = ss.worst_case;
    } else {
        try {
            q = rpu::solver::solve_contestant(g, report, opts);
            minimax = rpu::worst_case_loss(g, *q);
        } catch (const rpu::Error& e) {
            if (e.code() != rpu::ErrorCode::NoFeasibleResponse) throw;
            notes.push_back(std::string("no contestant strategy realizes lambda*: ") + e.what());
        }
    }
    if (q) {
        double gap = rpu::verify::check_nash_gap(g, report.strategy, *q);
        j["contestant"] = rpu::io::contestant_to_json(g, *q);
        j["worst_case_loss"] = minimax;
        j["nash_gap"] = gap;
        os << '\n' << rpu::io::format_table(g, q->per_message, "Q");
        os << "maximin: " << fmt(report.value, 9) << "  minimax: " << fmt(minimax, 9)
           << "  nash gap: " << fmt(gap, 9) << '\n';
        if (gap > f.tol)
            notes.push_back("no Nash equilibrium: maximin " + fmt(report.value) + " < minimax " + fmt(minimax));
    }
    os << "certificate: " << (cert.passed ? "PASS" : "FAIL") << " (max violation "
       << std::scientific << std::setprecision(2) << cert.max_violation << std::defaultfloat << ")\n";
    for (std::size_t y = 0; y < cert.per_message.size(); ++y)
        os << "  " << message_label(y) << ": " << rpu::verify::mode_name(cert.per_message[y].mode) << '\n';
    for (const auto& n : notes) os << "note: " << n << '\n';
    j["notes"] = notes;
    pr.emit(j);
    return report.converged && cert.passed ? kExitOk : kExitFailure;
}

int cmd_rcar(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    auto r = rpu::solver::solve_rcar(g, options_from(f));
    std::vector<double> sums(g.num_messages(), 0.0);
    std::vector<std::string> below;
    for (std::size_t y = 0; y < g.num_messages(); ++y) {
        for (std::size_t x : g.message(y)) sums[y] += r.q.q[x];
        if (sums[y] < 1.0 - 1e-9) below.push_back(message_label(y));
    }
    auto& os = pr.out();
    os << rpu::io::format_vector(g, r.q.q, "q");
    for (std::size_t y = 0; y < g.num_messages(); ++y)
        os << message_label(y) << " sum: " << fmt(sums[y]) << '\n';
    os << '\n' << rpu::io::format_table(g, rpu::strategy_table(g, r.report.strategy), "P");
    if (!below.empty()) {
        os << "note: messages with sum below 1 (may go unused):";
        for (const auto& b : below) os << ' ' << b;
        os << '\n';
    }
    pr.emit({{"game", rpu::io::game_to_json(g)},
             {"q", r.q.q},
             {"message_sums", sums},
             {"strategy", rpu::io::strategy_to_json(g, r.report.strategy)},
             {"unused_capable", below}});
    return kExitOk;
}

const char* yes_no(bool b) { return b ? "yes" : "no"; }

int cmd_classify(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    auto c = rpu::structure::classify(g);
    auto& os = pr.out();
    os << rpu::structure::summary_line(g, c) << '\n';
    os << "partition: " << yes_no(c.partition) << '\n'
       << "graph: " << yes_no(c.graph) << '\n'
       << "matroid: " << yes_no(c.matroid) << '\n'
       << "connected: " << yes_no(c.connected) << '\n'
       << "dominated messages: " << yes_no(c.has_dominated) << '\n'
       << "components: " << c.components << '\n';
    pr.emit({{"partition", c.partition},
             {"graph", c.graph},
             {"matroid", c.matroid},
             {"connected", c.connected},
             {"has_dominated", c.has_dominated},
             {"components", c.components}});
    return kExitOk;
}

int cmd_decompose(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    auto comps = rpu::structure::decompose(g);
    auto& os = pr.out();
    os << comps.size() << " component" << (comps.size() == 1 ? "" : "s") << '\n';
    json list = json::array();
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& c = comps[i];
        std::vector<std::string> outs, msgs;
        for (std::size_t x : c.outcomes) outs.push_back(g.outcomes()[x]);
        for (std::size_t y : c.messages) msgs.push_back(message_label(y));
        os << "component " << i + 1 << ": weight " << fmt(c.weight) << ", outcomes";
        for (const auto& o : outs) os << ' ' << o;
        os << ", messages";
        for (const auto& m : msgs) os << ' ' << m;
        os << '\n';
        list.push_back({{"weight", c.weight}, {"outcomes", outs}, {"messages", msgs}});
    }
    pr.emit({{"components", list}});
    return kExitOk;
}

int cmd_counterexample(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    auto ce = rpu::structure::counterexample_marginal(g);
    auto opts = options_from(f);
    auto log_game = ce.game.with_loss(rpu::LossSpec::of(rpu::LossKind::Logarithmic));
    auto brier_game = ce.game.with_loss(rpu::LossSpec::of(rpu::LossKind::Brier));
    auto log_report = rpu::solver::solve_quizmaster(log_game, opts);
    auto brier_report = rpu::solver::solve_quizmaster(brier_game, opts);
    auto log_cert = rpu::verify::check_rcar(log_game, log_report.strategy, ce.q, f.tol);
    auto brier_cert = rpu::verify::check_rcar(brier_game, brier_report.strategy, ce.q, f.tol);
    bool confirmed = log_cert.passed && !brier_cert.passed;

    auto& os = pr.out();
    os << rpu::io::format_vector(ce.game, ce.game.marginal(), "marginal");
    os << rpu::io::format_vector(ce.game, ce.q.q, "q");
    os << "branch: " << (ce.uniform_branch ? "uniform" : "nonuniform") << '\n';
    os << "witness pair: " << message_label(ce.y1) << ", " << message_label(ce.y2) << '\n';
    os << "log optimum RCAR: " << (log_cert.passed ? "pass" : "fail") << '\n';
    os << "brier optimum RCAR: " << (brier_cert.passed ? "pass" : "fail") << " (violation "
       << std::scientific << std::setprecision(3) << brier_cert.max_violation << std::defaultfloat << ")\n";
    os << (confirmed ? "no strategy is optimal for both losses\n" : "construction not confirmed\n");
    pr.emit({{"game", rpu::io::game_to_json(log_game)},
             {"q", ce.q.q},
             {"uniform_branch", ce.uniform_branch},
             {"witness", {message_label(ce.y1), message_label(ce.y2)}},
             {"log_rcar", rpu::io::certificate_to_json(log_game, log_cert)},
             {"brier_rcar", rpu::io::certificate_to_json(brier_game, brier_cert)},
             {"confirmed", confirmed}});
    return confirmed ? kExitOk : kExitFailure;
}

int cmd_oracle(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    auto oracle = rpu::solver::oracle_grid(g, f.resolution);
    auto report = rpu::solver::solve_quizmaster(g, options_from(f));
    double diff = report.value - oracle.value;
    auto& os = pr.out();
    os << "oracle value: " << fmt(oracle.value, 9) << " (" << oracle.grid_points << " grid points, resolution "
       << f.resolution << ")\n";
    os << "solver value: " << fmt(report.value, 9) << '\n';
    os << "difference: " << std::scientific << std::setprecision(3) << diff << std::defaultfloat << '\n';
    pr.emit({{"oracle_value", oracle.value},
             {"solver_value", report.value},
             {"difference", diff},
             {"grid_points", oracle.grid_points},
             {"resolution", f.resolution}});
    return kExitOk;
}

// Re-checks a report written by `solve --json`.
int cmd_verify(const Flags& f) {
    Printer pr(f);
    rpu::Game g = load(f);
    json doc;
    {
        std::ifstream in(f.path);
        doc = json::parse(in);
    }
    if (!doc.contains("report"))
        throw rpu::Error(rpu::ErrorCode::ParseError, f.path + ": no \"report\" object to verify");
    const json& r = doc["report"];
    auto p = rpu::io::strategy_from_json(g, r.at("strategy"));
    rpu::KtVector kt{r.at("kt").get<std::vector<double>>()};
    auto cert = rpu::verify::check_kt(g, p, kt, f.tol);
    double entropy = rpu::expected_entropy(g, p);
    double claimed = r.at("value").get<double>();
    bool value_ok = std::abs(entropy - claimed) <= f.tol;
    bool ok = cert.passed && value_ok;

    auto& os = pr.out();
    os << "kt certificate: " << (cert.passed ? "PASS" : "FAIL") << " (max violation " << std::scientific
       << std::setprecision(2) << cert.max_violation << std::defaultfloat << ")\n";
    os << "value: claimed " << fmt(claimed, 9) << ", recomputed " << fmt(entropy, 9)
       << (value_ok ? "" : "  MISMATCH") << '\n';
    json j{{"kt", rpu::io::certificate_to_json(g, cert)}, {"value_matches", value_ok}};
    if (doc.contains("contestant")) {
        auto q = rpu::io::contestant_from_json(g, doc["contestant"]);
        double gap = rpu::verify::check_nash_gap(g, p, q);
        bool gap_ok = gap >= -1e-9;
        ok = ok && gap_ok;
        os << "nash gap: " << fmt(gap, 9) << (gap_ok ? "" : "  NEGATIVE") << '\n';
        j["nash_gap"] = gap;
    }
    os << (ok ? "verified\n" : "verification failed\n");
    j["verified"] = ok;
    pr.emit(j);
    return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Worst-case coarse-data games: solve, certify and classify"};
    app.require_subcommand(1);
    Flags flags;

    auto add = [&](const std::string& name, const std::string& help, int (*fn)(const Flags&), bool solver_flags,
                   bool resolution = false) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("game", flags.path, "game file (or a JSON report carrying one)")->required();
        sub->add_option("--loss", flags.loss, "override the file's loss by name");
        sub->add_flag("--json", flags.json_out, "machine-readable output");
        sub->add_flag("--quiet", flags.quiet, "no output, exit status only");
        if (solver_flags) {
            sub->add_option("--tol", flags.tol, "certificate tolerance")->check(CLI::PositiveNumber);
            sub->add_option("--restarts", flags.restarts, "solver restarts");
            sub->add_option("--seed", flags.seed, "random seed (default: RPU_SEED or 0)");
        }
        if (resolution) sub->add_option("--resolution", flags.resolution, "grid resolution")->check(CLI::PositiveNumber);
        sub->final_callback([fn, &flags] { throw CLI::RuntimeError(fn(flags)); });
    };
    add("validate", "parse and validate a game file", cmd_validate, false);
    add("solve", "worst-case optimal strategies, KT vector and certificate", cmd_solve, true);
    add("rcar", "RCAR vector and strategy", cmd_rcar, true);
    add("classify", "structural classification", cmd_classify, false);
    add("decompose", "connected components with weights", cmd_decompose, false);
    add("counterexample", "marginal separating log and Brier optima", cmd_counterexample, true);
    add("oracle", "grid oracle value against the solver", cmd_oracle, true, true);
    add("verify", "re-check a JSON report from solve", cmd_verify, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::RuntimeError& e) {
        return e.get_exit_code();
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitValidation;
    } catch (const rpu::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rpu::is_validation_error(e.code()) ? kExitValidation : kExitFailure;
    } catch (const rpu::io::json::exception& e) {
        std::cerr << "error: ParseError: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitOk;
}
