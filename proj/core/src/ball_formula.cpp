#include "structlim/ball_formula.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "structlim/errors.hpp"
#include "structlim/fragment.hpp"

namespace structlim {

namespace {

// BFS order from the root, exploring sorted neighbor lists FIFO. Ball
// structures are connected, so this covers every vertex.
std::vector<int> bfs_order(const Structure& b, int root) {
    std::vector<int> order;
    std::vector<char> seen(static_cast<std::size_t>(b.domain_size()), 0);
    std::deque<int> queue{root};
    seen[static_cast<std::size_t>(root)] = 1;
    const auto& g = b.gaifman();
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        order.push_back(v);
        for (auto u : g.adj[static_cast<std::size_t>(v)]) {
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = 1;
                queue.push_back(u);
            }
        }
    }
    return order;
}

std::vector<int> distances_from(const Structure& b, int root) {
    std::vector<int> dist(static_cast<std::size_t>(b.domain_size()), -1);
    std::deque<int> queue{root};
    dist[static_cast<std::size_t>(root)] = 0;
    const auto& g = b.gaifman();
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (auto u : g.adj[static_cast<std::size_t>(v)]) {
            if (dist[static_cast<std::size_t>(u)] == -1) {
                dist[static_cast<std::size_t>(u)] = dist[static_cast<std::size_t>(v)] + 1;
                queue.push_back(u);
            }
        }
    }
    return dist;
}

// All tuples over the first `stage`+1 BFS vertices that involve the vertex
// at `stage`, with the positive ones asserted and the rest denied. This
// pins the induced structure on the witnesses exactly.
void stage_constraints(const Structure& b, const std::vector<int>& order,
                       const std::vector<int>& var_of_vertex, int stage,
                       std::vector<Formula>& positives, std::vector<Formula>& negatives) {
    const auto& sig = b.signature();
    const int vertex = order[static_cast<std::size_t>(stage)];
    for (int si = 0; si < sig.symbol_count(); ++si) {
        const int arity = sig.arity(si);
        // Enumerate all patterns over the placed vertices containing the
        // new one.
        std::vector<int> idx(static_cast<std::size_t>(arity), 0);
        while (true) {
            bool involves_new = false;
            for (int a = 0; a < arity; ++a) {
                if (order[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])] == vertex) {
                    involves_new = true;
                    break;
                }
            }
            if (involves_new) {
                Tuple t(static_cast<std::size_t>(arity));
                std::vector<int> vars(static_cast<std::size_t>(arity));
                for (int a = 0; a < arity; ++a) {
                    int vtx = order[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
                    t[static_cast<std::size_t>(a)] = static_cast<std::int32_t>(vtx);
                    vars[static_cast<std::size_t>(a)] = var_of_vertex[static_cast<std::size_t>(vtx)];
                }
                Formula atom = Formula::rel(sig.name(si), vars);
                if (b.has_tuple(si, t)) {
                    positives.push_back(std::move(atom));
                } else {
                    negatives.push_back(Formula::negation(std::move(atom)));
                }
            }
            int pos = arity - 1;
            while (pos >= 0) {
                if (++idx[static_cast<std::size_t>(pos)] <= stage) break;
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
    }
}

// "y is Gaifman-adjacent to x": for every symbol and ordered position pair,
// an existential over the remaining positions.
Formula adjacency_formula(const Signature& sig, int y_var, int x_var, int fresh_start) {
    std::vector<Formula> cases;
    for (int si = 0; si < sig.symbol_count(); ++si) {
        const int arity = sig.arity(si);
        if (arity < 2) continue;
        for (int a = 0; a < arity; ++a) {
            for (int b2 = 0; b2 < arity; ++b2) {
                if (a == b2) continue;
                std::vector<int> vars(static_cast<std::size_t>(arity), 0);
                std::vector<int> fresh;
                int next = fresh_start;
                for (int pos2 = 0; pos2 < arity; ++pos2) {
                    if (pos2 == a) {
                        vars[static_cast<std::size_t>(pos2)] = y_var;
                    } else if (pos2 == b2) {
                        vars[static_cast<std::size_t>(pos2)] = x_var;
                    } else {
                        vars[static_cast<std::size_t>(pos2)] = next;
                        fresh.push_back(next);
                        ++next;
                    }
                }
                Formula atom = Formula::rel(sig.name(si), vars);
                for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) {
                    atom = Formula::exists(*it, std::move(atom));
                }
                cases.push_back(std::move(atom));
            }
        }
    }
    if (cases.empty()) return Formula::falsity();
    return cases.size() == 1 ? cases.front() : Formula::disjunction(std::move(cases));
}

} // namespace

Formula ball_formula(const BallType& type) {
    const Structure& b = type.ball;
    const int k = b.domain_size();
    if (k == 0) throw validation_error("ball type has empty ball");
    std::vector<int> order = bfs_order(b, type.root);
    if (static_cast<int>(order.size()) != k) {
        throw validation_error("ball structure is not connected");
    }
    std::vector<int> dist = distances_from(b, type.root);
    std::vector<int> var_of_vertex(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) {
        var_of_vertex[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i + 1;
    }

    // Closure: any vertex adjacent to a witness strictly inside the ball is
    // itself a witness. Skipped when the interior is empty (radius 0).
    std::optional<Formula> closure;
    {
        std::vector<int> interior_vars;
        for (int i = 0; i < k; ++i) {
            int vtx = order[static_cast<std::size_t>(i)];
            if (dist[static_cast<std::size_t>(vtx)] < type.r) interior_vars.push_back(i + 1);
        }
        if (!interior_vars.empty()) {
            const int y = k + 1;
            const int fresh = k + 2;
            std::vector<Formula> membership;
            for (int i = 1; i <= k; ++i) membership.push_back(Formula::eq(y, i));
            std::vector<Formula> non_adjacent;
            for (int xv : interior_vars) {
                non_adjacent.push_back(
                    Formula::negation(adjacency_formula(b.signature(), y, xv, fresh)));
            }
            std::vector<Formula> body = std::move(membership);
            if (non_adjacent.size() == 1) {
                body.push_back(std::move(non_adjacent.front()));
            } else {
                body.push_back(Formula::conjunction(std::move(non_adjacent)));
            }
            closure = Formula::forall(y, Formula::disjunction(std::move(body)));
        }
    }

    // Assemble inside out: the innermost stage carries the closure.
    Formula current = Formula::truth();
    bool have_current = false;
    for (int stage = k - 1; stage >= 0; --stage) {
        std::vector<Formula> positives, negatives;
        stage_constraints(b, order, var_of_vertex, stage, positives, negatives);
        std::vector<Formula> conjuncts;
        // Positive adjacency first: it prunes the witness search hardest.
        for (auto& f : positives) conjuncts.push_back(std::move(f));
        for (int j = 1; j <= stage; ++j) {
            conjuncts.push_back(Formula::negation(Formula::eq(j, stage + 1)));
        }
        for (auto& f : negatives) conjuncts.push_back(std::move(f));
        if (stage == k - 1 && closure) conjuncts.push_back(*closure);
        if (have_current) conjuncts.push_back(std::move(current));
        if (conjuncts.empty()) {
            current = Formula::truth();
        } else {
            current = conjuncts.size() == 1 ? std::move(conjuncts.front())
                                            : Formula::conjunction(std::move(conjuncts));
        }
        have_current = true;
        if (stage > 0) current = Formula::exists(stage + 1, std::move(current));
    }
    return current;
}

std::vector<Formula> ball_formula_level(const Structure& a, const Structure& b, int r,
                                        int c, const CanonOptions& canon) {
    BallDistribution da = ball_distribution(a, r, c, canon);
    BallDistribution db = ball_distribution(b, r, c, canon);
    std::map<std::string, const BallType*> support;
    for (const auto& [t, w] : da.entries) support.emplace(t.key, &t);
    for (const auto& [t, w] : db.entries) support.emplace(t.key, &t);

    std::vector<Formula> level;
    std::vector<Formula> plus, minus;
    for (const auto& [key, type] : support) {
        Formula zeta = ball_formula(*type);
        const Rational* wa = da.weight_of(key);
        const Rational* wb = db.weight_of(key);
        Rational va = wa ? *wa : Rational(0);
        Rational vb = wb ? *wb : Rational(0);
        if (va > vb) plus.push_back(zeta);
        if (vb > va) minus.push_back(zeta);
        level.push_back(std::move(zeta));
    }
    // The signed-part disjunctions witness the total variation distance.
    if (plus.size() >= 2) level.push_back(Formula::disjunction(std::move(plus)));
    if (minus.size() >= 2) level.push_back(Formula::disjunction(std::move(minus)));
    return level;
}

namespace detail {

namespace {

// Reconstructs a ball type from a formula with the exact shape produced by
// ball_formula, then verifies by rebuilding. Returns (r, c) on success.
std::optional<std::pair<int, int>> decode_single(const Formula& f) {
    auto fv = free_variables(f);
    if (fv.size() != 1 || *fv.begin() != 1) return std::nullopt;

    // Peel the staged existential chain, collecting the constraint
    // conjuncts. Witness variables must be introduced as x2, x3, ...
    std::vector<Formula> conjuncts;
    int k = 1;
    const Formula* node = &f;
    while (true) {
        if (node->kind() == NodeKind::Exists && node->quantified_var() == k + 1) {
            ++k;
            node = &node->child(0);
            continue;
        }
        if (node->kind() == NodeKind::And) {
            const Formula* next = nullptr;
            for (const auto& ch : node->children()) {
                if (ch.kind() == NodeKind::Exists && ch.quantified_var() == k + 1 && !next) {
                    next = &ch;
                } else {
                    conjuncts.push_back(ch);
                }
            }
            if (next) {
                ++k;
                node = &next->child(0);
                continue;
            }
            break;
        }
        conjuncts.push_back(*node);
        break;
    }

    // Harvest positive atoms and mark usage.
    std::map<std::string, int> arities;
    std::vector<std::pair<std::string, Tuple>> tuples;
    int c = 0;
    bool bad = false;
    auto consider_atom = [&](const Formula& atom, bool positive) {
        const std::string& name = atom.rel_symbol();
        bool is_mark = name.size() >= 2 && name[0] == 'M' &&
                       name.find_first_not_of("0123456789", 1) == std::string::npos;
        if (is_mark) {
            c = std::max(c, std::stoi(name.substr(1)));
        } else {
            auto [it, inserted] = arities.emplace(name, static_cast<int>(atom.rel_vars().size()));
            if (!inserted && it->second != static_cast<int>(atom.rel_vars().size())) bad = true;
        }
        if (!positive) return;
        Tuple t;
        for (int v : atom.rel_vars()) {
            if (v < 1 || v > k) return; // closure internals; skip
            t.push_back(static_cast<std::int32_t>(v - 1));
        }
        tuples.emplace_back(name, std::move(t));
    };
    for (const auto& cj : conjuncts) {
        if (cj.kind() == NodeKind::Rel) consider_atom(cj, true);
        if (cj.kind() == NodeKind::Not && cj.child(0).kind() == NodeKind::Rel) {
            consider_atom(cj.child(0), false);
        }
    }
    if (bad) return std::nullopt;

    // Rebuild the candidate ball.
    std::vector<Symbol> base;
    for (const auto& [name, arity] : arities) base.push_back({name, arity});
    Signature sig(base, c);
    std::map<std::string, std::vector<Tuple>> rels;
    for (auto& [name, t] : tuples) {
        if (sig.index_of(name) < 0) return std::nullopt;
        if (static_cast<int>(t.size()) != sig.arity(sig.index_of(name))) return std::nullopt;
        rels[name].push_back(t);
    }
    for (auto& [name, ts] : rels) {
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    }
    Structure ball;
    try {
        ball = Structure(sig, k, std::move(rels));
    } catch (const validation_error&) {
        return std::nullopt;
    }

    std::vector<int> dist = distances_from(ball, 0);
    int ecc = 0;
    for (int d : dist) {
        if (d < 0) return std::nullopt; // disconnected
        ecc = std::max(ecc, d);
    }
    for (int r : {ecc, ecc + 1}) {
        BallType type;
        type.r = r;
        type.c = c;
        type.ball = ball;
        type.root = 0;
        Formula rebuilt;
        try {
            rebuilt = ball_formula(type);
        } catch (const error&) {
            continue;
        }
        if (normalize(rebuilt) == normalize(f)) return std::make_pair(r, c);
    }
    return std::nullopt;
}

} // namespace

std::optional<std::pair<int, int>> ball_local_tag(const Formula& f) {
    if (auto single = decode_single(f)) return single;
    switch (f.kind()) {
        case NodeKind::Not:
            return ball_local_tag(f.child(0));
        case NodeKind::And:
        case NodeKind::Or: {
            int r = 0, c = 0;
            for (const auto& ch : f.children()) {
                auto sub = ball_local_tag(ch);
                if (!sub) return std::nullopt;
                r = std::max(r, sub->first);
                c = std::max(c, sub->second);
            }
            return std::make_pair(r, c);
        }
        default:
            return std::nullopt;
    }
}

} // namespace detail

} // namespace structlim
