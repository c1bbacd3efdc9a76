#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "rpu/errors.hpp"
#include "rpu/game.hpp"
#include "rpu/io.hpp"
#include "rpu/losses.hpp"
#include "rpu/solver.hpp"
#include "rpu/structure.hpp"
#include "rpu/verify.hpp"

namespace py = pybind11;
using namespace rpu;

namespace {

Game make_game(const std::vector<std::string>& outcomes, const std::vector<std::vector<std::string>>& messages,
               const std::vector<double>& marginal, const std::string& loss) {
    RawGame raw;
    raw.outcomes = outcomes;
    for (const auto& names : messages) {
        Message m;
        for (const auto& name : names) {
            std::size_t x = 0;
            while (x < outcomes.size() && outcomes[x] != name) ++x;
            if (x == outcomes.size()) throw Error(ErrorCode::ParseError, "unknown outcome '" + name + "'");
            m.push_back(x);
        }
        raw.messages.push_back(std::move(m));
    }
    raw.marginal = marginal;
    raw.loss = LossSpec::of(parse_loss_kind(loss));
    return validate_game(std::move(raw));
}

std::vector<std::vector<std::string>> message_names(const Game& g) {
    std::vector<std::vector<std::string>> out;
    for (const auto& m : g.messages()) {
        std::vector<std::string> names;
        for (std::size_t x : m) names.push_back(g.outcomes()[x]);
        out.push_back(std::move(names));
    }
    return out;
}

solver::SolverOptions options(double tol, std::size_t restarts, std::uint64_t seed) {
    solver::SolverOptions o;
    o.certificate_tolerance = tol;
    o.restarts = restarts;
    o.seed = seed;
    return o;
}

struct Report {
    Game game;
    solver::SolveReport report;
};

py::dict certificate_dict(const verify::CertificateReport& c) {
    py::dict d;
    d["passed"] = c.passed;
    d["max_violation"] = c.max_violation;
    std::vector<std::string> modes;
    for (const auto& mc : c.per_message) modes.emplace_back(verify::mode_name(mc.mode));
    d["modes"] = modes;
    d["notes"] = c.notes;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Quizmaster games: worst-case optimal strategies, RCAR vectors and certificates.";

    // created once and kept for the life of the interpreter
    static PyObject* error = PyErr_NewException("rpu.RpuError", PyExc_ValueError, nullptr);
    m.attr("RpuError") = py::handle(error);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::handle(error)(e.what());
            inst.attr("code") = error_code_name(e.code());
            PyErr_SetObject(error, inst.ptr());
        }
    });

    py::class_<Game>(m, "Game")
        .def(py::init(&make_game), py::arg("outcomes"), py::arg("messages"), py::arg("marginal"),
             py::arg("loss") = "log")
        .def_static("load", &io::load_game, py::arg("path"))
        .def_static("from_json", [](const std::string& text) { return io::parse_game_text(text); }, py::arg("text"))
        .def("to_json", [](const Game& g) { return io::game_to_json(g).dump(2); })
        .def("with_loss", [](const Game& g, const std::string& kind) {
            return g.with_loss(LossSpec::of(parse_loss_kind(kind)));
        })
        .def_property_readonly("outcomes", &Game::outcomes)
        .def_property_readonly("messages", &message_names)
        .def_property_readonly("marginal", &Game::marginal)
        .def_property_readonly("loss", [](const Game& g) { return losses::describe(g.loss()); })
        .def("__repr__", [](const Game& g) { return "<Game " + structure::summary_line(g, structure::classify(g)) + ">"; });

    py::class_<Report>(m, "SolveReport")
        .def_property_readonly("strategy", [](const Report& r) { return strategy_table(r.game, r.report.strategy); })
        .def_property_readonly("kt", [](const Report& r) { return r.report.kt.lambda; })
        .def_property_readonly("value", [](const Report& r) { return r.report.value; })
        .def_property_readonly("converged", [](const Report& r) { return r.report.converged; })
        .def_property_readonly("method", [](const Report& r) { return r.report.method; })
        .def_property_readonly("iterations", [](const Report& r) { return r.report.iterations; })
        .def_property_readonly("residuals", [](const Report& r) { return r.report.residuals; })
        .def_property_readonly("trace", [](const Report& r) { return r.report.trace; })
        .def("to_json", [](const Report& r) {
            auto j = io::report_to_json(r.game, r.report);
            return io::json{{"game", io::game_to_json(r.game)}, {"report", j}}.dump(2);
        });

    m.def(
        "solve",
        [](const Game& g, double tol, std::size_t restarts, std::uint64_t seed) {
            return Report{g, solver::solve_quizmaster(g, options(tol, restarts, seed))};
        },
        py::arg("game"), py::arg("tol") = 1e-6, py::arg("restarts") = 5, py::arg("seed") = 0,
        "Worst-case optimal quizmaster strategy under the game's loss.");

    m.def(
        "rcar",
        [](const Game& g, double tol, std::uint64_t seed) {
            auto r = solver::solve_rcar(g, options(tol, 5, seed));
            return py::make_tuple(r.q.q, Report{g.with_loss(LossSpec::of(LossKind::Logarithmic)), r.report});
        },
        py::arg("game"), py::arg("tol") = 1e-6, py::arg("seed") = 0,
        "RCAR vector q and the logarithmic solve it was read from.");

    m.def(
        "contestant",
        [](const Report& r) { return solver::solve_contestant(r.game, r.report).per_message; },
        py::arg("report"), "Contestant strategy realizing the report's KT vector, one row per message.");

    m.def(
        "classify",
        [](const Game& g) {
            auto c = structure::classify(g);
            py::dict d;
            d["partition"] = c.partition;
            d["graph"] = c.graph;
            d["matroid"] = c.matroid;
            d["connected"] = c.connected;
            d["has_dominated"] = c.has_dominated;
            d["components"] = c.components;
            return d;
        },
        py::arg("game"));

    m.def(
        "check_kt",
        [](const Game& g, const std::vector<std::vector<double>>& table, const std::vector<double>& lambda, double tol) {
            return certificate_dict(verify::check_kt(g, quiz_strategy_from_table(g, table), KtVector{lambda}, tol));
        },
        py::arg("game"), py::arg("strategy"), py::arg("kt"), py::arg("tol") = 1e-6);

    m.def(
        "check_rcar",
        [](const Game& g, const std::vector<std::vector<double>>& table, const std::vector<double>& q, double tol) {
            return certificate_dict(verify::check_rcar(g, quiz_strategy_from_table(g, table), RcarVector{q}, tol));
        },
        py::arg("game"), py::arg("strategy"), py::arg("q"), py::arg("tol") = 1e-6);

    m.def(
        "expected_entropy",
        [](const Game& g, const std::vector<std::vector<double>>& table) {
            return expected_entropy(g, quiz_strategy_from_table(g, table));
        },
        py::arg("game"), py::arg("strategy"));

    m.def(
        "counterexample",
        [](const Game& g, std::optional<double> epsilon) {
            auto ce = structure::counterexample_marginal(g, epsilon);
            py::dict d;
            d["game"] = ce.game;
            d["marginal"] = ce.game.marginal();
            d["q"] = ce.q.q;
            d["uniform_branch"] = ce.uniform_branch;
            return d;
        },
        py::arg("game"), py::arg("epsilon") = py::none(),
        "Marginal on the game's structure where the Brier optimum is not RCAR.");

    m.def(
        "oracle",
        [](const Game& g, std::size_t resolution) { return solver::oracle_grid(g, resolution).value; },
        py::arg("game"), py::arg("resolution") = 100, "Best value over a grid of strategies.");

    m.def(
        "decompose",
        [](const Game& g) {
            py::list out;
            for (const auto& c : structure::decompose(g)) out.append(py::make_tuple(c.weight, c.game));
            return out;
        },
        py::arg("game"), "Connected components as (weight, game) pairs.");
}
