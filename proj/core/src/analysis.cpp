#include "structlim/analysis.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <random>

#include "structlim/errors.hpp"
#include "structlim/eval.hpp"
#include "structlim/parallel.hpp"
#include "structlim/parser.hpp"

namespace structlim {

Fo1LocalResult fo1local_equiv(const Structure& a, const Structure& b,
                              const CanonOptions& canon) {
    if (!(a.signature() == b.signature())) {
        throw validation_error("equivalence check requires matching signatures");
    }
    // Multiset of component isomorphism types for each structure.
    auto type_counts = [&](const Structure& s) {
        auto [comp, count] = connected_components(s);
        std::map<std::string, std::pair<Structure, long>> counts;
        for (int ci = 0; ci < count; ++ci) {
            VertexSet members(s.domain_size());
            for (int v = 0; v < s.domain_size(); ++v) {
                if (comp[static_cast<std::size_t>(v)] == ci) members.add(v);
            }
            Structure sub = induced_substructure(s, members);
            std::string key = canonical_form(sub, canon);
            auto it = counts.find(key);
            if (it == counts.end()) {
                counts.emplace(key, std::make_pair(std::move(sub), 1L));
            } else {
                ++it->second.second;
            }
        }
        return counts;
    };
    auto ca = type_counts(a);
    auto cb = type_counts(b);

    Fo1LocalResult out;
    if (ca.size() != cb.size()) return out;
    for (const auto& [key, entry] : ca) {
        if (cb.find(key) == cb.end()) return out;
    }
    // Proportionality: p_i * q_j == p_j * q_i for all type pairs.
    std::vector<long> p, q;
    std::vector<const Structure*> reps;
    for (const auto& [key, entry] : ca) {
        p.push_back(entry.second);
        q.push_back(cb.at(key).second);
        reps.push_back(&entry.first);
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            if (p[i] * q[j] != p[j] * q[i]) return out;
        }
    }
    long gp = 0, gq = 0;
    for (long v : p) gp = std::gcd(gp, v);
    for (long v : q) gq = std::gcd(gq, v);
    // C carries p_i / gcd copies of each type.
    Structure common;
    bool first = true;
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (long copy = 0; copy < p[i] / gp; ++copy) {
            common = first ? *reps[i] : disjoint_union(common, *reps[i]);
            first = false;
        }
    }
    out.equivalent = true;
    out.common = std::move(common);
    out.multiplier_a = gp;
    out.multiplier_b = gq;
    return out;
}

namespace {

// Radius-d ball masks over a small domain, packed into words.
std::vector<std::uint32_t> ball_masks(const Structure& s, int d) {
    const int n = s.domain_size();
    std::vector<std::uint32_t> adj(static_cast<std::size_t>(n), 0);
    const auto& g = s.gaifman();
    for (int v = 0; v < n; ++v) {
        adj[static_cast<std::size_t>(v)] = 1u << v;
        for (auto u : g.adj[static_cast<std::size_t>(v)]) {
            adj[static_cast<std::size_t>(v)] |= 1u << u;
        }
    }
    std::vector<std::uint32_t> out(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        std::uint32_t cur = 1u << v;
        for (int step = 0; step < d; ++step) {
            std::uint32_t next = cur;
            std::uint32_t rest = cur;
            while (rest) {
                int u = std::countr_zero(rest);
                rest &= rest - 1;
                next |= adj[static_cast<std::size_t>(u)];
            }
            if (next == cur) break;
            cur = next;
        }
        out[static_cast<std::size_t>(v)] = cur;
    }
    return out;
}

VertexSet mask_to_set(std::uint32_t mask, int n) {
    VertexSet out(n);
    for (int v = 0; v < n; ++v) {
        if (mask & (1u << v)) out.add(v);
    }
    return out;
}

} // namespace

ExpandResult expanding_check(const Structure& s, const ExpanderParams& params,
                             int max_subset_bits) {
    const int n = s.domain_size();
    if (n == 0) throw validation_error("expanding check undefined on empty domain");
    if (n > max_subset_bits) {
        throw budget_error("subset enumeration budget exceeded (n = " + std::to_string(n) +
                           " > " + std::to_string(max_subset_bits) +
                           "); try the h_out local-search heuristic instead");
    }
    if (!(params.eps > 0) || !(params.eps < Rational(1, 2))) {
        throw validation_error("eps must lie in (0, 1/2)");
    }
    if (!(params.delta > 0)) throw validation_error("delta must be positive");

    auto balls = ball_masks(s, params.d);
    // Per-size thresholds, precomputed so the subset loop is pure integer
    // work: eligibility of k is eps < k/n < 1-eps, and the growth condition
    // |Ball|/n > (1+delta) k/n means |Ball| >= min_ball[k] with
    // min_ball[k] = floor(k (dq+dp) / dq) + 1 for delta = dp/dq.
    const Integer eps_num = params.eps.get_num(), eps_den = params.eps.get_den();
    const Integer dp = params.delta.get_num(), dq = params.delta.get_den();
    std::vector<char> eligible(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> min_ball(static_cast<std::size_t>(n) + 1, 0);
    for (int k = 0; k <= n; ++k) {
        eligible[static_cast<std::size_t>(k)] =
            Integer(k) * eps_den > eps_num * n && Integer(n - k) * eps_den > eps_num * n;
        Integer threshold = (Integer(k) * (dq + dp)) / dq + 1;
        min_ball[static_cast<std::size_t>(k)] =
            threshold > n + 1 ? n + 1 : static_cast<int>(threshold.get_si());
    }
    auto violates = [&](std::uint32_t mask) {
        int k = std::popcount(mask);
        if (!eligible[static_cast<std::size_t>(k)]) return false;
        std::uint32_t ball = 0;
        std::uint32_t rest = mask;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            ball |= balls[static_cast<std::size_t>(v)];
        }
        return std::popcount(ball) < min_ball[static_cast<std::size_t>(k)];
    };

    const std::int64_t total = std::int64_t{1} << n;
    auto work = [&](std::int64_t lo, std::int64_t hi) -> std::int64_t {
        for (std::int64_t mask = lo; mask < hi; ++mask) {
            if (violates(static_cast<std::uint32_t>(mask))) return mask;
        }
        return std::int64_t{-1};
    };
    auto merge = [](std::int64_t x, std::int64_t y) {
        if (x < 0) return y;
        if (y < 0) return x;
        return std::min(x, y);
    };
    std::int64_t witness = parallel_chunk_reduce<std::int64_t>(0, total, -1, work, merge);
    ExpandResult out;
    if (witness < 0) {
        out.expanding = true;
    } else {
        out.expanding = false;
        out.witness = mask_to_set(static_cast<std::uint32_t>(witness), n);
    }
    return out;
}

HoutResult h_out(const Structure& s, SearchMode mode, std::int64_t budget,
                 std::uint64_t seed, int max_subset_bits) {
    const int n = s.domain_size();
    if (n == 0) throw validation_error("h_out undefined on empty domain");
    // Eligible subsets: 0 < |X|/n < 1/2, i.e. 1 <= |X| <= ceil(n/2) - 1.
    const int max_size = (n - 1) / 2;
    if (max_size < 1) {
        throw validation_error("h_out undefined: no subset satisfies 0 < |X|/|A| < 1/2");
    }
    auto balls = ball_masks(s, 1);
    auto ratio_of = [&](std::uint32_t mask) {
        int k = std::popcount(mask);
        std::uint32_t ball = 0;
        std::uint32_t rest = mask;
        while (rest) {
            int v = std::countr_zero(rest);
            rest &= rest - 1;
            ball |= balls[static_cast<std::size_t>(v)];
        }
        int out_count = std::popcount(ball & ~mask);
        Rational r(out_count, k);
        r.canonicalize();
        return r;
    };

    if (mode == SearchMode::Exact) {
        if (n > max_subset_bits) {
            throw budget_error("subset enumeration budget exceeded (n = " + std::to_string(n) +
                               " > " + std::to_string(max_subset_bits) +
                               "); use the local-search mode for an upper bound");
        }
        struct Best {
            bool set = false;
            Rational value;
            std::int64_t mask = 0;
        };
        const std::int64_t total = std::int64_t{1} << n;
        auto work = [&](std::int64_t lo, std::int64_t hi) {
            Best best;
            for (std::int64_t m = lo; m < hi; ++m) {
                auto mask = static_cast<std::uint32_t>(m);
                int k = std::popcount(mask);
                if (k < 1 || k > max_size) continue;
                Rational r = ratio_of(mask);
                if (!best.set || r < best.value ||
                    (r == best.value && m < best.mask)) {
                    best = {true, std::move(r), m};
                }
            }
            return best;
        };
        auto merge = [](Best a, Best b) {
            if (!a.set) return b;
            if (!b.set) return a;
            if (b.value < a.value || (b.value == a.value && b.mask < a.mask)) return b;
            return a;
        };
        Best best = parallel_chunk_reduce<Best>(0, total, {}, work, merge);
        HoutResult out;
        out.value = best.value;
        out.attaining = mask_to_set(static_cast<std::uint32_t>(best.mask), n);
        out.exact = true;
        return out;
    }

    // Local search: steepest-descent over add/remove/swap moves from seeded
    // random starts. Reports an upper bound with its witness.
    if (n > 31) throw budget_error("local-search h_out supports domains up to 31 vertices");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> bits(0, (1u << n) - 1);
    bool have = false;
    Rational best_value;
    std::uint32_t best_mask = 0;
    std::int64_t evals = 0;
    auto consider = [&](std::uint32_t mask) {
        int k = std::popcount(mask);
        if (k < 1 || k > max_size) return;
        ++evals;
        Rational r = ratio_of(mask);
        if (!have || r < best_value || (r == best_value && mask < best_mask)) {
            have = true;
            best_value = std::move(r);
            best_mask = mask;
        }
    };
    while (evals < budget) {
        std::uint32_t current = bits(rng);
        if (std::popcount(current) < 1 || std::popcount(current) > max_size) {
            current = 1u << (bits(rng) % n);
        }
        consider(current);
        bool improved = true;
        while (improved && evals < budget) {
            improved = false;
            Rational cur = ratio_of(current);
            std::uint32_t next = current;
            for (int v = 0; v < n && evals < budget; ++v) {
                std::uint32_t cand = current ^ (1u << v);
                int k = std::popcount(cand);
                if (k < 1 || k > max_size) continue;
                ++evals;
                Rational r = ratio_of(cand);
                if (r < cur) {
                    cur = r;
                    next = cand;
                    improved = true;
                }
            }
            current = next;
            consider(current);
        }
    }
    if (!have) throw validation_error("local search found no eligible subset");
    HoutResult out;
    out.value = best_value;
    out.attaining = mask_to_set(best_mask, n);
    out.exact = false;
    return out;
}

namespace {

// Maximum independent set in the Gaifman graph by branch and bound with a
// greedy clique-cover style bound.
struct MisSolver {
    const std::vector<std::vector<std::int32_t>>* adj;
    int n;
    std::int64_t budget;
    std::int64_t nodes = 0;
    int best = 0;

    std::vector<std::uint64_t> adj_mask;

    void build() {
        adj_mask.assign(static_cast<std::size_t>(n), 0);
        for (int v = 0; v < n; ++v) {
            for (auto u : (*adj)[static_cast<std::size_t>(v)]) {
                adj_mask[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
            }
        }
    }

    void run(std::uint64_t candidates, int size) {
        if (++nodes > budget) {
            throw budget_error("independence-number budget exceeded after " +
                               std::to_string(budget) + " nodes");
        }
        if (size + std::popcount(candidates) <= best) return;
        if (!candidates) {
            best = std::max(best, size);
            return;
        }
        int v = std::countr_zero(candidates);
        std::uint64_t without = candidates & ~(std::uint64_t{1} << v);
        // Branch: v in the set.
        run(without & ~adj_mask[static_cast<std::size_t>(v)], size + 1);
        // Branch: v not in the set (only worth trying when v has neighbors
        // among the candidates; otherwise including it is always at least
        // as good).
        if (adj_mask[static_cast<std::size_t>(v)] & candidates) {
            run(without, size);
        }
    }
};

} // namespace

Rational hall_ratio(const Structure& s, std::int64_t budget) {
    const int n = s.domain_size();
    if (n == 0) throw validation_error("Hall ratio undefined on empty domain");
    if (n > 63) throw budget_error("independence number supports domains up to 63 vertices");
    MisSolver solver;
    solver.adj = &s.gaifman().adj;
    solver.n = n;
    solver.budget = budget;
    solver.build();
    std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
    solver.run(all, 0);
    Rational r(solver.best, n);
    r.canonicalize();
    return r;
}

ClusterReport cluster_report(std::span<const Structure> sequence, int mark_index,
                             int d_max, std::span<const Formula> profile_formulas) {
    if (sequence.empty()) throw validation_error("cluster report needs a non-empty sequence");
    if (mark_index < 1) throw validation_error("mark index must be >= 1");
    ClusterReport report;
    report.mark = mark_index;
    report.d_max = d_max;
    for (const auto& f : profile_formulas) report.formulas.push_back(render(f));

    for (std::size_t i = 0; i < sequence.size(); ++i) {
        const Structure& s = sequence[i];
        int mark_symbol = s.signature().index_of(mark_name(mark_index));
        if (mark_symbol < 0) {
            throw validation_error("mark M" + std::to_string(mark_index) +
                                   " missing from structure " + std::to_string(i));
        }
        ClusterIndexReport row;
        row.index = static_cast<int>(i);
        VertexSet x = s.unary_as_set(mark_symbol);
        row.mark_measure = measure(s, x);
        VertexSet dx = boundary(s, x);
        for (int d = 1; d <= d_max; ++d) {
            row.ball_measures.push_back(measure(s, ball(s, x, d)));
            row.boundary_ball_measures.push_back(measure(s, ball(s, dx, d)));
        }
        // Globularity: sup over marked vertices of the marked mass within
        // their d-ball, relative to the mark measure. Undefined for an
        // empty mark.
        for (int d = 1; d <= d_max; ++d) {
            if (x.empty()) {
                row.globularity.push_back(std::nullopt);
            } else {
                Rational sup = 0;
                for (int v : x.members()) {
                    Rational val = measure(s, ball_of_vertex(s, v, d).intersect(x));
                    if (val > sup) sup = val;
                }
                Rational g = sup / row.mark_measure;
                g.canonicalize();
                row.globularity.push_back(std::move(g));
            }
            Rational res = 0;
            for (int v = 0; v < s.domain_size(); ++v) {
                Rational val = measure(s, ball_of_vertex(s, v, d));
                if (val > res) res = val;
            }
            row.residual_score.push_back(std::move(res));
        }
        // Profile: pairings over the induced substructure.
        Structure induced = induced_substructure(s, x);
        for (const auto& f : profile_formulas) {
            if (induced.domain_size() == 0) {
                row.profile.push_back(std::nullopt);
            } else {
                row.profile.push_back(pairing(induced, f));
            }
        }
        report.per_index.push_back(std::move(row));
    }

    // Trend flags: per-d monotonicity across the sequence.
    auto nonincreasing = [&](auto getter, int d) {
        for (std::size_t i = 1; i < report.per_index.size(); ++i) {
            if (getter(report.per_index[i], d) > getter(report.per_index[i - 1], d)) {
                return false;
            }
        }
        return true;
    };
    for (int d = 0; d < d_max; ++d) {
        report.trends.ball_measures_nonincreasing.push_back(nonincreasing(
            [](const ClusterIndexReport& r, int dd) { return r.ball_measures[static_cast<std::size_t>(dd)]; }, d));
        report.trends.boundary_ball_measures_nonincreasing.push_back(nonincreasing(
            [](const ClusterIndexReport& r, int dd) {
                return r.boundary_ball_measures[static_cast<std::size_t>(dd)];
            },
            d));
        report.trends.residual_score_nonincreasing.push_back(nonincreasing(
            [](const ClusterIndexReport& r, int dd) { return r.residual_score[static_cast<std::size_t>(dd)]; }, d));
    }
    report.trends.profiles_all_equal = true;
    for (std::size_t i = 1; i < report.per_index.size(); ++i) {
        if (report.per_index[i].profile != report.per_index[0].profile ||
            report.per_index[i].mark_measure != report.per_index[0].mark_measure) {
            report.trends.profiles_all_equal = false;
            break;
        }
    }
    return report;
}

} // namespace structlim
