#pragma once

// Seeded random structures and formulas for property tests.

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "structlim/formula.hpp"
#include "structlim/generate.hpp"
#include "structlim/structure.hpp"

namespace structlim::testing {

inline Structure random_structure(std::mt19937_64& rng, const Signature& sig, int max_n,
                                  double tuple_density = 0.4) {
    std::uniform_int_distribution<int> size_dist(1, max_n);
    int n = size_dist(rng);
    std::bernoulli_distribution keep(tuple_density);
    std::map<std::string, std::vector<Tuple>> rels;
    for (int si = 0; si < sig.symbol_count(); ++si) {
        int arity = sig.arity(si);
        std::vector<Tuple> tuples;
        std::vector<int> idx(static_cast<std::size_t>(arity), 0);
        while (true) {
            if (keep(rng)) {
                Tuple t(idx.begin(), idx.end());
                tuples.push_back(std::move(t));
            }
            int pos = arity - 1;
            while (pos >= 0) {
                if (++idx[static_cast<std::size_t>(pos)] < n) break;
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
        if (!tuples.empty()) rels[sig.name(si)] = std::move(tuples);
    }
    return Structure(sig, n, std::move(rels));
}

// A random graph with maximum Gaifman degree bounded by max_deg, with
// `marks` mark symbols populated at random.
inline Structure random_bounded_degree_graph(std::mt19937_64& rng, int max_n, int max_deg,
                                             int marks) {
    std::uniform_int_distribution<int> size_dist(1, max_n);
    int n = size_dist(rng);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    std::vector<Tuple> edges;
    std::uniform_int_distribution<int> vdist(0, n - 1);
    std::set<std::pair<int, int>> seen;
    int attempts = 3 * n;
    for (int i = 0; i < attempts; ++i) {
        int u = vdist(rng), v = vdist(rng);
        if (u == v) continue;
        std::pair<int, int> key = u < v ? std::pair{u, v} : std::pair{v, u};
        if (seen.count(key)) continue;
        if (degree[static_cast<std::size_t>(u)] >= max_deg ||
            degree[static_cast<std::size_t>(v)] >= max_deg) {
            continue;
        }
        seen.insert(key);
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(v)];
        edges.push_back({static_cast<std::int32_t>(u), static_cast<std::int32_t>(v)});
        edges.push_back({static_cast<std::int32_t>(v), static_cast<std::int32_t>(u)});
    }
    std::map<std::string, std::vector<Tuple>> rels;
    if (!edges.empty()) rels["E"] = std::move(edges);
    std::bernoulli_distribution marked(0.5);
    for (int mk = 1; mk <= marks; ++mk) {
        std::vector<Tuple> ts;
        for (int v = 0; v < n; ++v) {
            if (marked(rng)) ts.push_back({static_cast<std::int32_t>(v)});
        }
        if (!ts.empty()) rels[mark_name(mk)] = std::move(ts);
    }
    return Structure(graph_signature(marks), n, std::move(rels));
}

struct FormulaGenOptions {
    int max_depth = 3;
    int max_free_var = 2;
    bool allow_quantifiers = true;
    bool allow_equality = true;
};

inline Formula random_formula(std::mt19937_64& rng, const Signature& sig,
                              const FormulaGenOptions& opt, int depth = 0) {
    std::uniform_int_distribution<int> var_dist(1, opt.max_free_var);
    auto atom = [&]() -> Formula {
        std::uniform_int_distribution<int> pick(0, sig.symbol_count() > 0 ? 3 : 2);
        switch (pick(rng)) {
            case 0:
                return Formula::truth();
            case 1:
                return opt.allow_equality ? Formula::eq(var_dist(rng), var_dist(rng))
                                          : Formula::falsity();
            case 2:
                return Formula::falsity();
            default: {
                std::uniform_int_distribution<int> sym(0, sig.symbol_count() - 1);
                int si = sym(rng);
                std::vector<int> vars;
                for (int k = 0; k < sig.arity(si); ++k) vars.push_back(var_dist(rng));
                return Formula::rel(sig.name(si), vars);
            }
        }
    };
    if (depth >= opt.max_depth) return atom();
    std::uniform_int_distribution<int> pick(0, opt.allow_quantifiers ? 5 : 3);
    switch (pick(rng)) {
        case 0:
            return atom();
        case 1:
            return Formula::negation(random_formula(rng, sig, opt, depth + 1));
        case 2:
            return Formula::conjunction({random_formula(rng, sig, opt, depth + 1),
                                         random_formula(rng, sig, opt, depth + 1)});
        case 3:
            return Formula::disjunction({random_formula(rng, sig, opt, depth + 1),
                                         random_formula(rng, sig, opt, depth + 1)});
        case 4:
            return Formula::exists(var_dist(rng), random_formula(rng, sig, opt, depth + 1));
        default:
            return Formula::forall(var_dist(rng), random_formula(rng, sig, opt, depth + 1));
    }
}

} // namespace structlim::testing
