#include "rpu/losses.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rpu/errors.hpp"
#include "simplex_search.hpp"

namespace rpu {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPointMassSlack = 1e-12;

// Index of the point mass, or -1 when q is not degenerate.
long point_mass_at(std::span<const double> q) {
    for (std::size_t i = 0; i < q.size(); ++i)
        if (q[i] >= 1.0 - kPointMassSlack) return static_cast<long>(i);
    return -1;
}

double matrix_entry(const LossSpec& spec, std::size_t x, std::size_t xp) {
    switch (spec.kind) {
        case LossKind::Randomized01:
        case LossKind::Hard01:
            return x == xp ? 0.0 : 1.0;
        default:
            return spec.matrix[x][xp];
    }
}

double base_loss(const LossSpec& spec, std::size_t x, std::span<const double> q) {
    switch (spec.kind) {
        case LossKind::Logarithmic:
            return q[x] > 0.0 ? -std::log(q[x]) : kInf;
        case LossKind::Brier: {
            double s = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) {
                double d = (i == x ? 1.0 : 0.0) - q[i];
                s += d * d;
            }
            return s;
        }
        case LossKind::Randomized01:
            return 1.0 - q[x];
        case LossKind::MatrixRandomized: {
            double s = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) s += q[i] * spec.matrix[x][i];
            return s;
        }
        case LossKind::Hard01:
        case LossKind::MatrixHard: {
            long at = point_mass_at(q);
            if (at < 0) return kInf;
            return matrix_entry(spec, x, static_cast<std::size_t>(at));
        }
        case LossKind::SkewedLog: {
            const auto& c = spec.weights;
            double lin = 0.0;
            for (std::size_t i = 0; i < q.size(); ++i) lin += c[i] * q[i];
            if (c[x] == 0.0) return lin;
            if (q[x] <= 0.0) return kInf;
            return -c[x] * (1.0 + std::log(q[x])) + lin;
        }
    }
    return kInf;
}

double base_entropy(const LossSpec& spec, std::span<const double> p) {
    switch (spec.kind) {
        case LossKind::Logarithmic: {
            double h = 0.0;
            for (double v : p)
                if (v > 0.0) h -= v * std::log(v);
            return h;
        }
        case LossKind::Brier: {
            double s = 0.0;
            for (double v : p) s += v * v;
            return 1.0 - s;
        }
        case LossKind::Randomized01:
        case LossKind::Hard01:
            return 1.0 - *std::max_element(p.begin(), p.end());
        case LossKind::MatrixRandomized:
        case LossKind::MatrixHard: {
            double best = kInf;
            for (std::size_t xp = 0; xp < p.size(); ++xp) {
                double s = 0.0;
                for (std::size_t x = 0; x < p.size(); ++x)
                    if (p[x] > 0.0) s += p[x] * spec.matrix[x][xp];
                best = std::min(best, s);
            }
            return best;
        }
        case LossKind::SkewedLog: {
            double h = 0.0;
            for (std::size_t x = 0; x < p.size(); ++x)
                if (p[x] > 0.0) h -= spec.weights[x] * p[x] * std::log(p[x]);
            return h;
        }
    }
    return 0.0;
}

}  // namespace

const char* loss_kind_name(LossKind kind) {
    switch (kind) {
        case LossKind::Logarithmic: return "logarithmic";
        case LossKind::Brier: return "brier";
        case LossKind::Randomized01: return "randomized01";
        case LossKind::Hard01: return "hard01";
        case LossKind::MatrixRandomized: return "matrix_randomized";
        case LossKind::MatrixHard: return "matrix_hard";
        case LossKind::SkewedLog: return "skewed_log";
    }
    return "unknown";
}

LossKind parse_loss_kind(const std::string& name) {
    if (name == "logarithmic" || name == "log") return LossKind::Logarithmic;
    if (name == "brier") return LossKind::Brier;
    if (name == "randomized01" || name == "rand01") return LossKind::Randomized01;
    if (name == "hard01") return LossKind::Hard01;
    if (name == "matrix_randomized") return LossKind::MatrixRandomized;
    if (name == "matrix_hard") return LossKind::MatrixHard;
    if (name == "skewed_log") return LossKind::SkewedLog;
    throw Error(ErrorCode::InvalidLoss, "unknown loss kind '" + name + "'");
}

void validate_loss(const LossSpec& spec, std::size_t n) {
    if (spec.kind == LossKind::MatrixRandomized || spec.kind == LossKind::MatrixHard) {
        if (spec.matrix.size() != n)
            throw Error(ErrorCode::InvalidLoss, "loss matrix needs one row per outcome");
        for (const auto& row : spec.matrix) {
            if (row.size() != n)
                throw Error(ErrorCode::InvalidLoss, "loss matrix needs one column per outcome");
            for (double a : row)
                if (!std::isfinite(a) || a < 0.0)
                    throw Error(ErrorCode::InvalidLoss, "loss matrix entries must be finite and nonnegative");
        }
    }
    if (spec.kind == LossKind::SkewedLog) {
        if (spec.weights.size() != n)
            throw Error(ErrorCode::InvalidLoss, "skewed_log needs one weight per outcome");
        for (double c : spec.weights)
            if (!std::isfinite(c) || c < 0.0)
                throw Error(ErrorCode::InvalidLoss, "skewed_log weights must be finite and nonnegative");
    }
    if (spec.affine) {
        if (!(spec.affine->scale > 0.0) || !std::isfinite(spec.affine->scale))
            throw Error(ErrorCode::NonPositiveScale, "affine scale must be positive");
        if (!spec.affine->offsets.empty() && spec.affine->offsets.size() != n)
            throw Error(ErrorCode::InvalidLoss, "affine offsets need one entry per outcome");
        for (double b : spec.affine->offsets)
            if (!std::isfinite(b)) throw Error(ErrorCode::InvalidLoss, "affine offsets must be finite");
    }
}

namespace losses {

double affine_scale(const LossSpec& spec) { return spec.affine ? spec.affine->scale : 1.0; }

double affine_offset(const LossSpec& spec, std::size_t x) {
    if (!spec.affine || spec.affine->offsets.empty()) return 0.0;
    return spec.affine->offsets[x];
}

double loss(const LossSpec& spec, std::size_t x, std::span<const double> q) {
    double l = base_loss(spec, x, q);
    if (!spec.affine) return l;
    return affine_scale(spec) * l + affine_offset(spec, x);
}

double entropy(const LossSpec& spec, std::span<const double> p) {
    double h = base_entropy(spec, p);
    if (!spec.affine) return h;
    double lin = 0.0;
    for (std::size_t x = 0; x < p.size(); ++x) lin += affine_offset(spec, x) * p[x];
    return affine_scale(spec) * h + lin;
}

bool is_proper(const LossSpec& spec) {
    return spec.kind == LossKind::Logarithmic || spec.kind == LossKind::Brier ||
           spec.kind == LossKind::SkewedLog;
}

bool is_piecewise_linear(const LossSpec& spec) { return !is_proper(spec); }

bool is_hard(const LossSpec& spec) {
    return spec.kind == LossKind::Hard01 || spec.kind == LossKind::MatrixHard;
}

LossSpec randomized_counterpart(const LossSpec& spec) {
    LossSpec out = spec;
    if (spec.kind == LossKind::Hard01) out.kind = LossKind::Randomized01;
    if (spec.kind == LossKind::MatrixHard) out.kind = LossKind::MatrixRandomized;
    return out;
}

std::vector<std::vector<double>> decision_matrix(const LossSpec& spec, std::size_t n) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t xp = 0; xp < n; ++xp) a[x][xp] = matrix_entry(spec, x, xp);
    return a;
}

std::vector<double> best_response(const LossSpec& spec, std::span<const double> p) {
    if (is_proper(spec)) return {p.begin(), p.end()};
    // The affine offsets add sum_x b_x p(x) to every pure response, so they never change the argmin.
    std::vector<double> q(p.size(), 0.0);
    std::size_t arg = 0;
    double best = kInf;
    for (std::size_t xp = 0; xp < p.size(); ++xp) {
        double s = 0.0;
        for (std::size_t x = 0; x < p.size(); ++x)
            if (p[x] > 0.0) s += p[x] * matrix_entry(spec, x, xp);
        if (s < best) {
            best = s;
            arg = xp;
        }
    }
    q[arg] = 1.0;
    return q;
}

LossSpec affine_transform(const LossSpec& spec, double scale, std::vector<double> offsets) {
    if (!(scale > 0.0)) throw Error(ErrorCode::NonPositiveScale, "affine scale must be positive");
    LossSpec out = spec;
    AffineTransform t;
    double a0 = affine_scale(spec);
    t.scale = scale * a0;
    std::size_t n = offsets.size();
    if (spec.affine && spec.affine->offsets.size() > n) n = spec.affine->offsets.size();
    t.offsets.assign(n, 0.0);
    for (std::size_t x = 0; x < n; ++x) {
        double b0 = (spec.affine && x < spec.affine->offsets.size()) ? spec.affine->offsets[x] : 0.0;
        double b = x < offsets.size() ? offsets[x] : 0.0;
        t.offsets[x] = scale * b0 + b;
    }
    out.affine = t;
    return out;
}

bool is_symmetric_between(const LossSpec& spec, std::size_t x1, std::size_t x2) {
    if (x1 == x2) return true;
    if (spec.affine && affine_offset(spec, x1) != affine_offset(spec, x2)) return false;
    switch (spec.kind) {
        case LossKind::Logarithmic:
        case LossKind::Brier:
        case LossKind::Randomized01:
        case LossKind::Hard01:
            return true;
        case LossKind::SkewedLog:
            return spec.weights[x1] == spec.weights[x2];
        case LossKind::MatrixRandomized:
        case LossKind::MatrixHard: {
            const auto& a = spec.matrix;
            if (a[x1][x1] != a[x2][x2] || a[x1][x2] != a[x2][x1]) return false;
            for (std::size_t x = 0; x < a.size(); ++x) {
                if (x == x1 || x == x2) continue;
                if (a[x][x1] != a[x][x2] || a[x1][x] != a[x2][x]) return false;
            }
            return true;
        }
    }
    return false;
}

double entropy_inner_min(const LossSpec& spec, std::span<const double> p,
                         const std::vector<std::size_t>& support) {
    const std::size_t n = p.size();
    const std::size_t d = support.size();
    if (d == 0) throw Error(ErrorCode::InvalidStrategy, "empty support");
    std::vector<double> q(n, 0.0);
    auto expected = [&](const std::vector<double>& w) {
        std::fill(q.begin(), q.end(), 0.0);
        for (std::size_t i = 0; i < d; ++i) q[support[i]] = w[i];
        double s = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            if (p[x] <= 0.0) continue;
            double l = loss(spec, x, q);
            if (!std::isfinite(l)) return kInf;
            s += p[x] * l;
        }
        return s;
    };
    std::size_t res = d <= 3 ? detail::resolution_for_budget(d, 100000) : detail::resolution_for_budget(d, 20000);
    return detail::minimize_on_simplex(d, expected, res, 30).value;
}

std::string describe(const LossSpec& spec) {
    std::ostringstream os;
    os << loss_kind_name(spec.kind);
    if (spec.affine) os << " (affine, scale " << spec.affine->scale << ")";
    return os.str();
}

}  // namespace losses
}  // namespace rpu
