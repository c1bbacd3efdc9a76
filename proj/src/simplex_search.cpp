#include "simplex_search.hpp"

#include <cmath>
#include <limits>

namespace rpu::detail {

double simplex_grid_size(std::size_t d, std::size_t r) {
    if (d == 0) return 0.0;
    // C(r + d - 1, d - 1)
    double c = 1.0;
    for (std::size_t i = 1; i < d; ++i) c = c * static_cast<double>(r + i) / static_cast<double>(i);
    return std::round(c);
}

std::size_t resolution_for_budget(std::size_t d, std::size_t budget) {
    if (d <= 1) return 1;
    std::size_t r = 1;
    while (simplex_grid_size(d, r + 1) <= static_cast<double>(budget)) ++r;
    return r;
}

namespace {

bool compose(std::size_t i, std::size_t remaining, std::vector<std::size_t>& k,
             const std::function<bool(const std::vector<std::size_t>&)>& f) {
    if (i + 1 == k.size()) {
        k[i] = remaining;
        return f(k);
    }
    for (std::size_t v = 0; v <= remaining; ++v) {
        k[i] = v;
        if (!compose(i + 1, remaining - v, k, f)) return false;
    }
    return true;
}

}  // namespace

void for_each_composition(std::size_t d, std::size_t r,
                          const std::function<bool(const std::vector<std::size_t>&)>& f) {
    if (d == 0) return;
    std::vector<std::size_t> k(d, 0);
    compose(0, r, k, f);
}

namespace {

SimplexSearchResult refine(std::vector<double> x, double fx, const SimplexObjective& f,
                           double radius, int steps) {
    const std::size_t d = x.size();
    std::vector<double> trial(d);
    for (int s = 0; s < steps; ++s) {
        for (int sweep = 0; sweep < 64; ++sweep) {
            double best = fx;
            std::size_t bi = d, bj = d;
            double bstep = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                for (std::size_t j = 0; j < d; ++j) {
                    if (i == j || x[j] <= 0.0) continue;
                    double h = std::min(radius, x[j]);
                    trial = x;
                    trial[i] += h;
                    trial[j] -= h;
                    double v = f(trial);
                    if (v > best) {
                        best = v;
                        bi = i;
                        bj = j;
                        bstep = h;
                    }
                }
            }
            if (bi == d) break;
            x[bi] += bstep;
            x[bj] -= bstep;
            fx = best;
        }
        radius *= 0.5;
    }
    return {x, fx};
}

}  // namespace

SimplexSearchResult maximize_on_simplex(std::size_t d, const SimplexObjective& f,
                                        std::size_t resolution, int refine_steps) {
    SimplexSearchResult best{std::vector<double>(d, 0.0), -std::numeric_limits<double>::infinity()};
    if (d == 0) return best;
    if (d == 1) {
        best.point = {1.0};
        best.value = f(best.point);
        return best;
    }
    std::vector<double> x(d);
    const double inv = 1.0 / static_cast<double>(resolution);
    bool seen = false;
    for_each_composition(d, resolution, [&](const std::vector<std::size_t>& k) {
        for (std::size_t i = 0; i < d; ++i) x[i] = static_cast<double>(k[i]) * inv;
        double v = f(x);
        if (!seen || v > best.value) {
            seen = true;
            best.value = v;
            best.point = x;
        }
        return true;
    });
    if (!std::isfinite(best.value)) {
        // every grid point is -inf (or nan); refinement cannot help
        return best;
    }
    return refine(best.point, best.value, f, inv, refine_steps);
}

SimplexSearchResult minimize_on_simplex(std::size_t d, const SimplexObjective& f,
                                        std::size_t resolution, int refine_steps) {
    auto r = maximize_on_simplex(
        d, [&](const std::vector<double>& x) { return -f(x); }, resolution, refine_steps);
    r.value = -r.value;
    return r;
}

}  // namespace rpu::detail
