#include "rpu/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "rpu/errors.hpp"

namespace rpu::io {

namespace {

[[noreturn]] void fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

std::string line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

std::vector<double> number_list(const json& v, const std::string& field) {
    if (!v.is_array()) fail(field + " must be a list");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(parse_probability(e));
    return out;
}

}  // namespace

double parse_probability(const json& value) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) fail("expected a number or a fraction string, got " + value.dump());
    const std::string s = value.get<std::string>();
    auto slash = s.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            double v = std::stod(s, &used);
            if (used != s.size()) fail("malformed number '" + s + "'");
            return v;
        }
        std::string a = s.substr(0, slash), b = s.substr(slash + 1);
        double num = std::stod(a, &used);
        if (used != a.size()) fail("malformed fraction '" + s + "'");
        double den = std::stod(b, &used);
        if (used != b.size() || den == 0.0) fail("malformed fraction '" + s + "'");
        return num / den;
    } catch (const std::invalid_argument&) {
        fail("malformed number '" + s + "'");
    } catch (const std::out_of_range&) {
        fail("number out of range '" + s + "'");
    }
}

LossSpec parse_loss(const json& value, std::size_t n) {
    LossSpec spec;
    if (value.is_string()) {
        spec.kind = parse_loss_kind(value.get<std::string>());
    } else if (value.is_object()) {
        if (!value.contains("kind")) fail("loss needs a \"kind\"");
        spec.kind = parse_loss_kind(value.at("kind").get<std::string>());
        if (value.contains("matrix")) {
            for (const auto& row : value.at("matrix")) spec.matrix.push_back(number_list(row, "loss matrix row"));
        }
        if (value.contains("weights")) spec.weights = number_list(value.at("weights"), "loss weights");
        if (value.contains("affine")) {
            const auto& a = value.at("affine");
            AffineTransform t;
            if (a.contains("scale")) t.scale = parse_probability(a.at("scale"));
            if (a.contains("offsets")) t.offsets = number_list(a.at("offsets"), "affine offsets");
            spec.affine = t;
        }
    } else {
        fail("loss must be a kind name or an object");
    }
    validate_loss(spec, n);
    return spec;
}

json loss_to_json(const LossSpec& spec) {
    json j;
    j["kind"] = loss_kind_name(spec.kind);
    if (!spec.matrix.empty()) j["matrix"] = spec.matrix;
    if (!spec.weights.empty()) j["weights"] = spec.weights;
    if (spec.affine) {
        j["affine"]["scale"] = spec.affine->scale;
        j["affine"]["offsets"] = spec.affine->offsets;
    }
    return j;
}

Game parse_game(const json& doc) {
    if (!doc.is_object()) fail("game must be an object");
    if (doc.contains("game")) return parse_game(doc.at("game"));
    for (const char* key : {"outcomes", "messages", "marginal"})
        if (!doc.contains(key)) fail(std::string("game is missing \"") + key + "\"");
    RawGame raw;
    for (const auto& o : doc.at("outcomes")) {
        if (!o.is_string()) fail("outcome names must be strings");
        raw.outcomes.push_back(o.get<std::string>());
    }
    std::size_t y = 0;
    for (const auto& msg : doc.at("messages")) {
        ++y;
        if (!msg.is_array()) fail("message " + std::to_string(y) + " must be a list of outcome names");
        Message m;
        for (const auto& name : msg) {
            if (!name.is_string()) fail("message " + std::to_string(y) + " must list outcome names");
            auto it = std::find(raw.outcomes.begin(), raw.outcomes.end(), name.get<std::string>());
            if (it == raw.outcomes.end())
                fail("message " + std::to_string(y) + " names unknown outcome '" + name.get<std::string>() + "'");
            m.push_back(static_cast<std::size_t>(it - raw.outcomes.begin()));
        }
        raw.messages.push_back(m);
    }
    const auto& marg = doc.at("marginal");
    if (marg.is_object()) {
        raw.marginal.assign(raw.outcomes.size(), 0.0);
        for (auto it = marg.begin(); it != marg.end(); ++it) {
            auto pos = std::find(raw.outcomes.begin(), raw.outcomes.end(), it.key());
            if (pos == raw.outcomes.end()) fail("marginal names unknown outcome '" + it.key() + "'");
            raw.marginal[static_cast<std::size_t>(pos - raw.outcomes.begin())] = parse_probability(it.value());
        }
    } else {
        raw.marginal = number_list(marg, "marginal");
    }
    double sum = std::accumulate(raw.marginal.begin(), raw.marginal.end(), 0.0);
    const double exact = default_tolerances().marginal;
    if (std::abs(sum - 1.0) > exact && std::abs(sum - 1.0) <= 1e-9)
        for (double& v : raw.marginal) v /= sum;
    raw.loss = doc.contains("loss") ? parse_loss(doc.at("loss"), raw.outcomes.size())
                                    : LossSpec::of(LossKind::Logarithmic);
    return validate_game(std::move(raw));
}

Game parse_game_text(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin + ": " + line_col(text, e.byte == 0 ? 0 : e.byte - 1) + ": invalid JSON");
    }
    try {
        return parse_game(doc);
    } catch (const json::exception& e) {
        fail(origin + ": " + e.what());
    }
}

Game load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_game_text(ss.str(), path);
}

json game_to_json(const Game& game) {
    json j;
    j["outcomes"] = game.outcomes();
    j["messages"] = json::array();
    for (const auto& m : game.messages()) {
        json names = json::array();
        for (std::size_t x : m) names.push_back(game.outcomes()[x]);
        j["messages"].push_back(names);
    }
    j["marginal"] = game.marginal();
    j["loss"] = loss_to_json(game.loss());
    return j;
}

json strategy_to_json(const Game& game, const QuizStrategy& p) {
    json rows = json::array();
    auto table = strategy_table(game, p);
    for (std::size_t y = 0; y < game.num_messages(); ++y) {
        json row = json::array();
        for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
            if (game.incidence().find(x, y)) row.push_back(table[y][x]);
            else row.push_back(nullptr);
        }
        rows.push_back(row);
    }
    return rows;
}

QuizStrategy strategy_from_json(const Game& game, const json& rows) {
    std::vector<std::vector<double>> table;
    for (const auto& row : rows) {
        std::vector<double> r;
        for (const auto& v : row) r.push_back(v.is_null() ? 0.0 : parse_probability(v));
        table.push_back(r);
    }
    return quiz_strategy_from_table(game, table);
}

json contestant_to_json(const Game& game, const ContestantStrategy& q) {
    validate_contestant(game, q);
    return q.per_message;
}

ContestantStrategy contestant_from_json(const Game& game, const json& rows) {
    ContestantStrategy q;
    for (const auto& row : rows) q.per_message.push_back(number_list(row, "contestant row"));
    validate_contestant(game, q);
    return q;
}

json report_to_json(const Game& game, const solver::SolveReport& report) {
    json j;
    j["method"] = report.method;
    j["strategy"] = strategy_to_json(game, report.strategy);
    j["kt"] = report.kt.lambda;
    j["value"] = report.value;
    j["iterations"] = report.iterations;
    j["converged"] = report.converged;
    j["residuals"] = report.residuals;
    return j;
}

json certificate_to_json(const Game& game, const verify::CertificateReport& cert) {
    json j;
    j["passed"] = cert.passed;
    j["max_violation"] = std::isfinite(cert.max_violation) ? json(cert.max_violation) : json("inf");
    j["messages"] = json::array();
    for (std::size_t y = 0; y < cert.per_message.size(); ++y) {
        const auto& mc = cert.per_message[y];
        json m;
        m["message"] = "y" + std::to_string(y + 1);
        if (y < game.num_messages()) {
            m["outcomes"] = json::array();
            for (std::size_t x : game.message(y)) m["outcomes"].push_back(game.outcomes()[x]);
        }
        m["mode"] = verify::mode_name(mc.mode);
        m["violation"] = std::isfinite(mc.violation) ? json(mc.violation) : json("inf");
        if (!mc.touch_point.empty()) m["touch_point"] = mc.touch_point;
        j["messages"].push_back(m);
    }
    j["notes"] = cert.notes;
    return j;
}

std::string format_table(const Game& game, const std::vector<std::vector<double>>& rows,
                         const std::string& corner, int precision) {
    const int width = precision + 5;
    std::ostringstream os;
    os << std::left << std::setw(6) << corner << std::right;
    for (const auto& name : game.outcomes()) os << std::setw(width) << name;
    os << '\n';
    os << std::fixed << std::setprecision(precision);
    for (std::size_t y = 0; y < rows.size(); ++y) {
        os << std::left << std::setw(6) << ("y" + std::to_string(y + 1)) << std::right;
        for (std::size_t x = 0; x < game.num_outcomes(); ++x) {
            if (y < game.num_messages() && !game.incidence().find(x, y)) os << std::setw(width) << "-";
            else os << std::setw(width) << rows[y][x];
        }
        os << '\n';
    }
    os << std::left << std::setw(6) << "p" << std::right;
    for (double v : game.marginal()) os << std::setw(width) << v;
    os << '\n';
    return os.str();
}

std::string format_vector(const Game& game, const std::vector<double>& v, const std::string& label, int precision) {
    const int width = precision + 5;
    std::ostringstream os;
    os << std::left << std::setw(6) << label << std::right << std::fixed << std::setprecision(precision);
    for (std::size_t x = 0; x < game.num_outcomes(); ++x) os << std::setw(width) << v[x];
    os << '\n';
    return os.str();
}

}  // namespace rpu::io
