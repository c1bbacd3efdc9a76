#pragma once

namespace rpu {

struct Tolerances {
    double marginal = 1e-12;      // sum of p against 1
    double feasibility = 1e-9;    // row sums of a quizmaster strategy
    double certificate = 1e-6;    // KT / RCAR / Nash certificates
    double support = 1e-10;       // P(y) at or below this counts as unused
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace rpu
