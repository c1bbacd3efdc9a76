#pragma once

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rpu/game.hpp"
#include "rpu/structure.hpp"

namespace rpu::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<std::string> outcome_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t x = 0; x < n; ++x) names.push_back("x" + std::to_string(x + 1));
    return names;
}

// Entries bounded away from zero so that every outcome carries real weight.
inline std::vector<double> random_marginal(Rng& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.2, 1.0);
    std::vector<double> p(n);
    for (double& v : p) v = u(rng);
    double s = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= s;
    return p;
}

inline Message random_subset(Rng& rng, std::size_t n, std::size_t min_size, std::size_t max_size) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t k = uniform_int(rng, min_size, std::min(max_size, n));
    Message m(all.begin(), all.begin() + static_cast<long>(k));
    std::sort(m.begin(), m.end());
    return m;
}

// Distinct nonempty messages covering {0..n-1}.
inline std::vector<Message> random_structure(Rng& rng, std::size_t n, std::size_t num_messages,
                                             std::size_t max_size) {
    while (true) {
        std::set<Message> seen;
        std::vector<Message> ms;
        for (std::size_t y = 0; y < num_messages; ++y) {
            Message m = random_subset(rng, n, 1, max_size);
            if (seen.insert(m).second) ms.push_back(m);
        }
        std::vector<bool> covered(n, false);
        for (const auto& m : ms)
            for (std::size_t x : m) covered[x] = true;
        for (std::size_t x = 0; x < n; ++x) {
            if (covered[x]) continue;
            Message& m = ms[uniform_int(rng, 0, ms.size() - 1)];
            m.push_back(x);
            std::sort(m.begin(), m.end());
        }
        std::set<Message> distinct(ms.begin(), ms.end());
        if (distinct.size() == ms.size()) return ms;
    }
}

inline Game make_game(std::vector<Message> ms, std::vector<double> p, LossSpec loss = {}) {
    return validate_game(RawGame{outcome_names(p.size()), std::move(ms), std::move(p), std::move(loss)});
}

// |X| and |Y| drawn from [2, max_outcomes] and [1, max_messages].
inline Game random_game(Rng& rng, std::size_t max_outcomes, std::size_t max_messages, LossSpec loss = {}) {
    std::size_t n = uniform_int(rng, 2, max_outcomes);
    std::size_t ny = uniform_int(rng, 1, max_messages);
    auto ms = random_structure(rng, n, ny, n);
    return make_game(ms, random_marginal(rng, n), std::move(loss));
}

// Every message has one or two outcomes.
inline std::vector<Message> random_graph_structure(Rng& rng, std::size_t n) {
    while (true) {
        std::size_t ny = uniform_int(rng, 1, n + 2);
        auto ms = random_structure(rng, n, ny, 2);
        if (structure::is_graph_game(ms)) return ms;
    }
}

inline std::vector<Message> random_counterexample_structure(Rng& rng, std::size_t max_outcomes) {
    while (true) {
        std::size_t n = uniform_int(rng, 3, max_outcomes);
        std::size_t ny = uniform_int(rng, 2, 5);
        auto ms = random_structure(rng, n, ny, std::min<std::size_t>(n - 1, 4));
        auto c = structure::classify(n, ms);
        if (c.connected && !c.has_dominated && !c.graph && !c.matroid) return ms;
    }
}

// Two or three blocks of outcomes, each with its own random structure.
inline Game random_disconnected_game(Rng& rng, std::size_t max_block, LossSpec loss = {}) {
    std::size_t blocks = uniform_int(rng, 2, 3);
    std::vector<Message> ms;
    std::size_t offset = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t n = uniform_int(rng, 1, max_block);
        auto local = random_structure(rng, n, uniform_int(rng, 1, 3), n);
        for (auto m : local) {
            for (auto& x : m) x += offset;
            ms.push_back(m);
        }
        offset += n;
    }
    return make_game(ms, random_marginal(rng, offset), std::move(loss));
}

inline std::size_t simplex_dimension(const Game& g) {
    std::size_t d = 0;
    for (std::size_t x = 0; x < g.num_outcomes(); ++x) d += g.incidence().of_outcome(x).size() - 1;
    return d;
}

}  // namespace rpu::testing
