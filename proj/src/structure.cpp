#include "rpu/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "rpu/errors.hpp"

namespace rpu::structure {

namespace {

bool strict_subset(const Message& a, const Message& b) {
    return a.size() < b.size() && std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool intersects(const Message& a, const Message& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i == *j) return true;
        if (*i < *j) ++i;
        else ++j;
    }
    return false;
}

Message minus(const Message& a, const Message& b) {
    Message out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::size_t overlap(const Message& a, const Message& b) {
    Message out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out.size();
}

Message exchange(const Message& m, std::size_t out, std::size_t in) {
    Message r;
    for (std::size_t x : m)
        if (x != out) r.push_back(x);
    r.push_back(in);
    std::sort(r.begin(), r.end());
    return r;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

std::vector<std::size_t> component_labels(std::size_t n, const std::vector<Message>& messages) {
    UnionFind uf(n);
    for (const auto& m : messages)
        for (std::size_t x : m) uf.unite(m.front(), x);
    std::vector<std::size_t> root(n);
    for (std::size_t x = 0; x < n; ++x) root[x] = uf.find(x);
    // relabel roots 0, 1, ... in order of their smallest outcome
    std::vector<std::size_t> label(n, n);
    std::vector<std::size_t> out(n);
    std::size_t next = 0;
    for (std::size_t x = 0; x < n; ++x) {
        if (label[root[x]] == n) label[root[x]] = next++;
        out[x] = label[root[x]];
    }
    return out;
}

}  // namespace

DominationResult remove_dominated(const Game& game) {
    const auto& ms = game.messages();
    std::vector<Message> kept_messages;
    DominationResult r{game, {}, {}};
    for (std::size_t y = 0; y < ms.size(); ++y) {
        bool dominated = false;
        for (std::size_t z = 0; z < ms.size() && !dominated; ++z)
            dominated = z != y && strict_subset(ms[y], ms[z]);
        if (dominated) {
            r.removed.push_back(y);
        } else {
            r.kept.push_back(y);
            kept_messages.push_back(ms[y]);
        }
    }
    r.game = validate_game(RawGame{game.outcomes(), kept_messages, game.marginal(), game.loss()});
    return r;
}

QuizStrategy embed_strategy(const Game& original, const DominationResult& reduced, const QuizStrategy& p) {
    std::vector<double> joint(original.incidence().size(), 0.0);
    const auto& inc = reduced.game.incidence();
    for (std::size_t i = 0; i < inc.size(); ++i) {
        const auto& pr = inc.pair(i);
        joint[*original.incidence().find(pr.outcome, reduced.kept[pr.message])] = p.joint[i];
    }
    return QuizStrategy{std::move(joint)};
}

std::vector<Component> decompose(const Game& game) {
    const std::size_t n = game.num_outcomes();
    auto label = component_labels(n, game.messages());
    std::size_t count = 1 + *std::max_element(label.begin(), label.end());
    std::vector<Component> out;
    for (std::size_t c = 0; c < count; ++c) {
        std::vector<std::size_t> outcomes;
        std::vector<std::size_t> local(n, n);
        double weight = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            if (label[x] != c) continue;
            local[x] = outcomes.size();
            outcomes.push_back(x);
            weight += game.marginal()[x];
        }
        RawGame raw;
        for (std::size_t x : outcomes) {
            raw.outcomes.push_back(game.outcomes()[x]);
            raw.marginal.push_back(game.marginal()[x] / weight);
        }
        double s = std::accumulate(raw.marginal.begin(), raw.marginal.end(), 0.0);
        for (double& v : raw.marginal) v /= s;
        std::vector<std::size_t> messages;
        for (std::size_t y = 0; y < game.num_messages(); ++y) {
            const auto& m = game.message(y);
            if (label[m.front()] != c) continue;
            Message lm;
            for (std::size_t x : m) lm.push_back(local[x]);
            raw.messages.push_back(lm);
            messages.push_back(y);
        }
        raw.loss = game.loss();
        if (raw.loss.kind == LossKind::MatrixRandomized || raw.loss.kind == LossKind::MatrixHard) {
            std::vector<std::vector<double>> a;
            for (std::size_t x : outcomes) {
                std::vector<double> row;
                for (std::size_t xp : outcomes) row.push_back(game.loss().matrix[x][xp]);
                a.push_back(row);
            }
            raw.loss.matrix = a;
        }
        if (raw.loss.kind == LossKind::SkewedLog) {
            std::vector<double> w;
            for (std::size_t x : outcomes) w.push_back(game.loss().weights[x]);
            raw.loss.weights = w;
        }
        if (raw.loss.affine && !raw.loss.affine->offsets.empty()) {
            std::vector<double> b;
            for (std::size_t x : outcomes) b.push_back(game.loss().affine->offsets[x]);
            raw.loss.affine->offsets = b;
        }
        out.push_back(Component{validate_game(std::move(raw)), outcomes, messages, weight});
    }
    return out;
}

QuizStrategy recombine(const Game& game, const std::vector<Component>& components,
                       const std::vector<QuizStrategy>& strategies) {
    if (components.size() != strategies.size())
        throw Error(ErrorCode::InvalidStrategy, "one strategy per component is required");
    std::vector<double> joint(game.incidence().size(), 0.0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        const auto& comp = components[c];
        const auto& inc = comp.game.incidence();
        for (std::size_t i = 0; i < inc.size(); ++i) {
            const auto& pr = inc.pair(i);
            auto j = game.incidence().find(comp.outcomes[pr.outcome], comp.messages[pr.message]);
            joint[*j] = comp.weight * strategies[c].joint[i];
        }
    }
    return QuizStrategy{std::move(joint)};
}

bool is_partition(const std::vector<Message>& messages) {
    for (std::size_t a = 0; a < messages.size(); ++a)
        for (std::size_t b = a + 1; b < messages.size(); ++b)
            if (intersects(messages[a], messages[b])) return false;
    return true;
}

bool is_graph_game(const std::vector<Message>& messages) {
    return std::all_of(messages.begin(), messages.end(), [](const Message& m) { return m.size() <= 2; });
}

bool has_dominated(const std::vector<Message>& messages) {
    for (std::size_t a = 0; a < messages.size(); ++a)
        for (std::size_t b = 0; b < messages.size(); ++b)
            if (a != b && strict_subset(messages[a], messages[b])) return true;
    return false;
}

std::size_t count_components(std::size_t num_outcomes, const std::vector<Message>& messages) {
    if (num_outcomes == 0) return 0;
    auto label = component_labels(num_outcomes, messages);
    return 1 + *std::max_element(label.begin(), label.end());
}

bool is_matroid(const std::vector<Message>& messages) {
    if (messages.empty()) return true;
    const std::size_t k = messages.front().size();
    for (const auto& m : messages)
        if (m.size() != k) return false;
    std::set<Message> family(messages.begin(), messages.end());
    for (const auto& y1 : messages) {
        for (const auto& y2 : messages) {
            if (&y1 == &y2) continue;
            Message only1 = minus(y1, y2);
            Message only2 = minus(y2, y1);
            for (std::size_t x1 : only1) {
                bool ok = false;
                for (std::size_t x2 : only2) {
                    if (family.count(exchange(y1, x1, x2))) {
                        ok = true;
                        break;
                    }
                }
                if (!ok) return false;
            }
        }
    }
    return true;
}

Classification classify(std::size_t num_outcomes, const std::vector<Message>& messages) {
    Classification c;
    c.partition = is_partition(messages);
    c.graph = is_graph_game(messages);
    c.matroid = is_matroid(messages);
    c.components = count_components(num_outcomes, messages);
    c.connected = c.components == 1;
    c.has_dominated = has_dominated(messages);
    return c;
}

Classification classify(const Game& game) { return classify(game.num_outcomes(), game.messages()); }

std::string summary_line(const Game& game, const Classification& c) {
    std::ostringstream os;
    os << game.num_outcomes() << (game.num_outcomes() == 1 ? " outcome, " : " outcomes, ")
       << game.num_messages() << (game.num_messages() == 1 ? " message, " : " messages, ")
       << (c.connected ? "connected" : "disconnected (" + std::to_string(c.components) + " components)")
       << ", " << (c.graph ? "graph" : "not graph") << ", " << (c.matroid ? "matroid" : "not matroid");
    if (c.partition) os << ", partition";
    if (c.has_dominated) os << ", has dominated messages";
    return os.str();
}

namespace {

constexpr double kTight = 1e-12;

double message_sum(const Message& m, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t x : m) s += q[x];
    return s;
}

double spread(const Message& m, const std::vector<double>& q) {
    double lo = q[m.front()], hi = q[m.front()];
    for (std::size_t x : m) {
        lo = std::min(lo, q[x]);
        hi = std::max(hi, q[x]);
    }
    return hi - lo;
}

// Message indices sorted by their content.
std::vector<std::size_t> lexicographic_order(const std::vector<Message>& ms) {
    std::vector<std::size_t> order(ms.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ms[a] < ms[b]; });
    return order;
}

}  // namespace

namespace {

Counterexample construct(const Game& game, std::optional<double> epsilon) {
    const auto& ms = game.messages();
    const std::size_t n = game.num_outcomes();
    Classification cls = classify(game);
    if (!cls.connected) throw Error(ErrorCode::NotApplicable, "structure is not connected");
    if (cls.has_dominated) throw Error(ErrorCode::NotApplicable, "structure has dominated messages");
    if (cls.graph) throw Error(ErrorCode::NotApplicable, "structure is a graph game");
    if (cls.matroid) throw Error(ErrorCode::NotApplicable, "structure is a matroid");

    const auto order = lexicographic_order(ms);
    std::size_t k2 = 0;
    for (const auto& m : ms) k2 = std::max(k2, m.size());
    const bool uniform = std::all_of(ms.begin(), ms.end(), [&](const Message& m) { return m.size() == k2; });

    Counterexample ce{game, {}, {}, uniform, 0, 0, std::nullopt, {}, 0, 0, {}};
    std::vector<double> q(n, 0.0);
    std::set<Message> family(ms.begin(), ms.end());

    if (!uniform) {
        std::optional<std::size_t> y1;
        for (std::size_t y : order) {
            if (ms[y].size() >= k2) continue;
            bool touches = false;
            for (const auto& m : ms)
                if (m.size() == k2 && intersects(m, ms[y])) touches = true;
            if (!touches) continue;
            if (!y1 || ms[y].size() > ms[*y1].size()) y1 = y;
        }
        if (!y1) throw Error(ErrorCode::ConstructionFailed, "no smaller message meets a largest one");
        std::optional<std::size_t> y2;
        for (std::size_t y : order) {
            if (ms[y].size() != k2) continue;
            std::size_t o = overlap(ms[y], ms[*y1]);
            if (o == 0) continue;
            if (!y2 || o > overlap(ms[*y2], ms[*y1])) y2 = y;
        }
        ce.y1 = *y1;
        ce.y2 = *y2;
        const Message& m1 = ms[*y1];
        const Message& m2 = ms[*y2];
        const double k1 = static_cast<double>(m1.size());
        const double a = static_cast<double>(minus(m1, m2).size());
        const double b = static_cast<double>(minus(m2, m1).size());
        std::fill(q.begin(), q.end(), 1.0 / (b * k1));
        for (std::size_t x : minus(m2, m1)) q[x] = a / (b * k1);
        for (std::size_t x : m1) q[x] = 1.0 / k1;
    } else {
        const double k = static_cast<double>(k2);
        bool found = false;
        for (std::size_t ia = 0; ia < order.size() && !found; ++ia) {
            for (std::size_t ib = 0; ib < order.size() && !found; ++ib) {
                const Message& m1 = ms[order[ia]];
                const Message& m2 = ms[order[ib]];
                if (ia == ib || !intersects(m1, m2)) continue;
                Message only1 = minus(m1, m2);
                for (std::size_t x2 : minus(m2, m1)) {
                    bool exchanged = false;
                    for (std::size_t x1 : only1)
                        if (family.count(exchange(m1, x1, x2))) exchanged = true;
                    if (!exchanged) {
                        ce.y1 = order[ia];
                        ce.y2 = order[ib];
                        ce.x2 = x2;
                        found = true;
                        break;
                    }
                }
            }
        }
        if (!found) throw Error(ErrorCode::ConstructionFailed, "no intersecting pair fails the exchange property");
        const double eps = epsilon ? *epsilon : 1.0 / (2.0 * k);
        std::fill(q.begin(), q.end(), 1.0 / k - eps);
        q[*ce.x2] = 1.0 / k + eps;
        for (std::size_t x : ms[ce.y1]) q[x] = 1.0 / k;
    }
    ce.initial_q = q;
    for (const auto& m : ms)
        if (message_sum(m, q) > 1.0 + kTight)
            throw Error(ErrorCode::ConstructionFailed, "initial vector exceeds 1 on a message");

    auto tight = [&](const Message& m) { return message_sum(m, q) >= 1.0 - kTight; };
    auto maximized = [&](std::size_t x) {
        for (std::size_t i : game.incidence().of_outcome(x))
            if (tight(ms[game.incidence().pair(i).message])) return true;
        return false;
    };

    for (std::size_t round = 0; round <= n; ++round) {
        std::optional<std::size_t> pick;
        if (uniform && ce.x2 && !maximized(*ce.x2)) pick = ce.x2;
        if (!pick && uniform) {
            // keep the maximized set connected: grow through messages that straddle it
            for (std::size_t x = 0; x < n && !pick; ++x) {
                if (maximized(x)) continue;
                for (std::size_t i : game.incidence().of_outcome(x)) {
                    const Message& m = ms[game.incidence().pair(i).message];
                    bool crossing = std::any_of(m.begin(), m.end(), [&](std::size_t z) { return maximized(z); });
                    if (crossing) {
                        pick = x;
                        break;
                    }
                }
            }
        }
        if (!pick) {
            for (std::size_t x = 0; x < n && !pick; ++x)
                if (!maximized(x)) pick = x;
        }
        if (!pick) break;
        double slack = 1.0;
        for (std::size_t i : game.incidence().of_outcome(*pick))
            slack = std::min(slack, 1.0 - message_sum(ms[game.incidence().pair(i).message], q));
        q[*pick] += slack;
    }
    for (std::size_t x = 0; x < n; ++x)
        if (!maximized(x)) throw Error(ErrorCode::ConstructionFailed, "greedy phase left an outcome unmaximized");

    for (std::size_t y = 0; y < ms.size(); ++y)
        if (tight(ms[y])) ce.tight_messages.push_back(y);

    // witness: prefer the construction's own first message as the uniform one
    std::vector<std::size_t> uniform_candidates{ce.y1};
    for (std::size_t y : order)
        if (y != ce.y1) uniform_candidates.push_back(y);
    bool witnessed = false;
    for (std::size_t ya : uniform_candidates) {
        if (!tight(ms[ya]) || spread(ms[ya], q) >= 1e-12) continue;
        std::vector<std::size_t> others{ce.y2};
        for (std::size_t y : order)
            if (y != ce.y2) others.push_back(y);
        for (std::size_t yb : others) {
            if (yb == ya || !tight(ms[yb]) || !intersects(ms[ya], ms[yb])) continue;
            if (spread(ms[yb], q) > 1e-9) {
                ce.uniform_message = ya;
                ce.nonuniform_message = yb;
                witnessed = true;
                break;
            }
        }
        if (witnessed) break;
    }
    if (!witnessed) throw Error(ErrorCode::ConstructionFailed, "no tight uniform / non-uniform intersecting pair");

    const double py = 1.0 / static_cast<double>(ce.tight_messages.size());
    std::vector<double> p(n, 0.0);
    for (std::size_t y : ce.tight_messages)
        for (std::size_t x : ms[y]) p[x] += q[x] * py;
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= total;

    ce.game = game.with_marginal(p);
    ce.q = RcarVector{q};
    std::vector<double> joint(ce.game.incidence().size(), 0.0);
    std::set<std::size_t> tight_set(ce.tight_messages.begin(), ce.tight_messages.end());
    for (std::size_t i = 0; i < joint.size(); ++i) {
        const auto& pr = ce.game.incidence().pair(i);
        if (tight_set.count(pr.message)) joint[i] = q[pr.outcome] * py / total;
    }
    ce.strategy = make_quiz_strategy(ce.game, std::move(joint));
    return ce;
}

}  // namespace

Counterexample counterexample_marginal(const Game& game, std::optional<double> epsilon) {
    if (epsilon) return construct(game, epsilon);
    try {
        return construct(game, std::nullopt);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::ConstructionFailed) throw;
    }
    // smaller perturbation, in case the larger one broke the witness
    std::size_t k = 0;
    for (const auto& m : game.messages()) k = std::max(k, m.size());
    return construct(game, 1.0 / (2.0 * static_cast<double>(k) * static_cast<double>(game.num_outcomes())));
}

}  // namespace rpu::structure
