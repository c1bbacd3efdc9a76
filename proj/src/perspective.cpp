#include "perspective.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simplex_search.hpp"

namespace rpu::detail {

double message_phi(const LossSpec& spec, const std::vector<std::size_t>& outcomes, const double* v,
                   std::vector<double>& scratch) {
    const std::size_t d = outcomes.size();
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += v[k];
    if (!(s > 0.0)) return 0.0;
    for (std::size_t k = 0; k < d; ++k) scratch[outcomes[k]] = v[k] / s;
    double h = losses::entropy(spec, scratch);
    for (std::size_t k = 0; k < d; ++k) scratch[outcomes[k]] = 0.0;
    return s * h;
}

void message_gradient(const LossSpec& spec, const std::vector<std::size_t>& outcomes, const double* v,
                      double* grad) {
    const std::size_t d = outcomes.size();
    double s = 0.0, s2 = 0.0, cv = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        s += v[k];
        s2 += v[k] * v[k];
        if (spec.kind == LossKind::SkewedLog) cv += spec.weights[outcomes[k]] * v[k];
    }
    for (std::size_t k = 0; k < d; ++k) {
        double g = 0.0;
        switch (spec.kind) {
            case LossKind::Logarithmic:
                g = v[k] > 0.0 ? std::log(s / v[k]) : std::numeric_limits<double>::infinity();
                break;
            case LossKind::Brier:
                g = 1.0 - 2.0 * v[k] / s + s2 / (s * s);
                break;
            case LossKind::SkewedLog: {
                double c = spec.weights[outcomes[k]];
                if (c == 0.0) g = cv / s;
                else g = v[k] > 0.0 ? -c * (1.0 + std::log(v[k] / s)) + cv / s
                                    : std::numeric_limits<double>::infinity();
                break;
            }
            default:
                g = 0.0;
        }
        grad[k] = losses::affine_scale(spec) * g + losses::affine_offset(spec, outcomes[k]);
    }
}

void message_hessian(const LossSpec& spec, const std::vector<std::size_t>& outcomes, const double* v,
                     Eigen::MatrixXd& hess) {
    const auto d = static_cast<Eigen::Index>(outcomes.size());
    hess.setZero(d, d);
    double s = 0.0, s2 = 0.0, cv = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        s += v[k];
        s2 += v[k] * v[k];
        if (spec.kind == LossKind::SkewedLog) cv += spec.weights[outcomes[k]] * v[k];
    }
    const double a = losses::affine_scale(spec);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            double h = 0.0;
            switch (spec.kind) {
                case LossKind::Logarithmic:
                    h = 1.0 / s - (i == j ? 1.0 / v[i] : 0.0);
                    break;
                case LossKind::Brier:
                    h = -(i == j ? 2.0 / s : 0.0) + 2.0 * (v[i] + v[j]) / (s * s) - 2.0 * s2 / (s * s * s);
                    break;
                case LossKind::SkewedLog: {
                    double ci = spec.weights[outcomes[i]];
                    double cj = spec.weights[outcomes[j]];
                    h = (ci + cj) / s - cv / (s * s);
                    if (i == j && ci != 0.0) h -= ci / v[i];
                    break;
                }
                default:
                    break;
            }
            hess(i, j) = a * h;
        }
    }
}

std::vector<double> project_to_simplex(const std::vector<double>& v) {
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        css += u[k];
        double t = (css - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0.0) theta = t;
    }
    std::vector<double> w(v.size());
    for (std::size_t k = 0; k < v.size(); ++k) w[k] = std::max(v[k] - theta, 0.0);
    return w;
}

std::vector<double> max_gap_point(const LossSpec& spec, const std::vector<std::size_t>& outcomes,
                                  const std::vector<double>& lambda, std::size_t num_outcomes) {
    const std::size_t d = outcomes.size();
    const double a = losses::affine_scale(spec);
    // with L' = a L + b the gap is a (H(w) - lambda' . w), lambda' = (lambda - b) / a
    std::vector<double> lp(d);
    for (std::size_t k = 0; k < d; ++k)
        lp[k] = (lambda[outcomes[k]] - losses::affine_offset(spec, outcomes[k])) / a;
    std::vector<double> w(d, 0.0);
    if (spec.kind == LossKind::Logarithmic) {
        double lo = *std::min_element(lp.begin(), lp.end());
        double z = 0.0;
        for (std::size_t k = 0; k < d; ++k) z += (w[k] = std::exp(-(lp[k] - lo)));
        for (double& x : w) x /= z;
    } else if (spec.kind == LossKind::Brier) {
        std::vector<double> t(d);
        for (std::size_t k = 0; k < d; ++k) t[k] = -lp[k] / 2.0;
        w = project_to_simplex(t);
    } else {
        LossSpec base = spec;
        base.affine.reset();
        std::vector<double> full(num_outcomes, 0.0);
        auto gap = [&](const std::vector<double>& x) {
            std::fill(full.begin(), full.end(), 0.0);
            double lin = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                full[outcomes[k]] = x[k];
                lin += lp[k] * x[k];
            }
            return losses::entropy(base, full) - lin;
        };
        w = maximize_on_simplex(d, gap, resolution_for_budget(d, 20000), 40).point;
    }
    std::vector<double> out(num_outcomes, 0.0);
    for (std::size_t k = 0; k < d; ++k) out[outcomes[k]] = w[k];
    return out;
}

}  // namespace rpu::detail
