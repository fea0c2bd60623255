#include "structlim/lifts.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <unordered_map>

#include "structlim/errors.hpp"
#include "structlim/parallel.hpp"

namespace structlim {

namespace {

Integer assignment_count(int n, int c) {
    return integer_pow(1UL << static_cast<unsigned>(c), static_cast<unsigned long>(n));
}

Signature lifted_signature(const Structure& base, int c) {
    return base.signature().with_marks(base.signature().marks() + c);
}

} // namespace

Structure Lift::to_structure() const {
    const int c = static_cast<int>(marks.size());
    Signature sig = lifted_signature(base, c);
    std::map<std::string, std::vector<Tuple>> rels;
    for (int si = 0; si < base.signature().symbol_count(); ++si) {
        if (!base.tuples(si).empty()) rels[base.signature().name(si)] = base.tuples(si);
    }
    const int m0 = base.signature().marks();
    for (int j = 0; j < c; ++j) {
        std::vector<Tuple> ts;
        for (int v : marks[static_cast<std::size_t>(j)].members()) {
            ts.push_back({static_cast<std::int32_t>(v)});
        }
        if (!ts.empty()) rels[mark_name(m0 + j + 1)] = std::move(ts);
    }
    return Structure(sig, base.domain_size(), std::move(rels));
}

void enumerate_lifts(const Structure& s, int c, std::int64_t budget,
                     const std::function<void(const Lift&)>& fn) {
    if (c < 0) throw validation_error("negative mark count");
    const int n = s.domain_size();
    Integer total = assignment_count(n, c);
    if (total > budget) {
        throw budget_error("lift enumeration needs (2^" + std::to_string(c) + ")^" +
                           std::to_string(n) + " = " + total.get_str() +
                           " assignments, budget is " + std::to_string(budget));
    }
    const std::int64_t count = total.get_si();
    const unsigned mask_bits = static_cast<unsigned>(c);
    for (std::int64_t idx = 0; idx < count; ++idx) {
        Lift lift;
        lift.base = s;
        lift.marks.assign(static_cast<std::size_t>(c), VertexSet(n));
        std::int64_t rem = idx;
        // Vertex 0 is the most significant digit of the assignment word.
        for (int v = n - 1; v >= 0; --v) {
            auto digit = static_cast<std::uint32_t>(rem & ((1 << mask_bits) - 1));
            rem >>= mask_bits;
            for (int j = 0; j < c; ++j) {
                if (digit & (1u << j)) lift.marks[static_cast<std::size_t>(j)].add(v);
            }
        }
        fn(lift);
    }
}

BallDistribution LiftStatSet::materialize(std::size_t member) const {
    BallDistribution out;
    out.r = r;
    out.c = c;
    for (const auto& [type_index, count] : members[member]) {
        Rational w(count, base_size);
        w.canonicalize();
        out.entries.emplace_back(types[type_index], std::move(w));
    }
    return out;
}

namespace {

// Per-vertex data reused across all lifts of one base: the rooted ball's
// vertex list and its induced base structure never change, only the marks
// do, so types are cached per (vertex, mark word).
struct VertexBall {
    std::vector<int> vertices; // sorted
    int root_position = 0;     // position of the root in `vertices`
};

struct LiftEngine {
    const Structure* base = nullptr;
    int n = 0;
    int c_added = 0;
    int c_total = 0; // base marks + added marks
    int r = 0;
    CanonOptions canon;
    std::vector<VertexBall> balls;

    // Worker-local type cache: (vertex, mark word over the ball) -> type.
    // Different vertices with isomorphic balls share one local id, keyed by
    // the canonical form.
    struct TypeCache {
        std::unordered_map<std::uint64_t, int> ids; // packed (vertex, word) -> local id
        std::unordered_map<std::string, int> by_key;
        std::vector<std::string> keys; // local id -> canonical key
        std::vector<BallType> types;   // local id -> type
    };

    void prepare() {
        n = base->domain_size();
        balls.resize(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            VertexSet members = ball_of_vertex(*base, v, r);
            auto& vb = balls[static_cast<std::size_t>(v)];
            vb.vertices = members.members();
            vb.root_position = static_cast<int>(
                std::lower_bound(vb.vertices.begin(), vb.vertices.end(), v) -
                vb.vertices.begin());
            // Mark words are packed into 52 bits next to the vertex id.
            if (static_cast<std::size_t>(vb.vertices.size()) *
                    static_cast<std::size_t>(c_added) > 52) {
                throw budget_error("ball too large for lift enumeration: " +
                                   std::to_string(vb.vertices.size()) + " vertices with " +
                                   std::to_string(c_added) + " added marks");
            }
        }
    }

    // The type of vertex v's ball when the added marks restricted to the
    // ball form `word` (c_added bits per ball vertex, in vertex order).
    int type_of(TypeCache& cache, int v, std::uint64_t word) const {
        std::uint64_t packed = (word << 12) | static_cast<std::uint64_t>(v);
        auto it = cache.ids.find(packed);
        if (it != cache.ids.end()) return it->second;

        const auto& vb = balls[static_cast<std::size_t>(v)];
        // Build the marked ball structure: induced base plus added marks.
        VertexSet members(n, vb.vertices);
        std::vector<int> old_to_new;
        Structure induced = induced_substructure(*base, members, &old_to_new);
        std::map<std::string, std::vector<Tuple>> rels;
        const auto& isig = induced.signature();
        for (int si = 0; si < isig.symbol_count(); ++si) {
            if (!induced.tuples(si).empty()) rels[isig.name(si)] = induced.tuples(si);
        }
        const int m0 = base->signature().marks();
        for (int j = 0; j < c_added; ++j) {
            std::vector<Tuple> ts;
            for (std::size_t pos = 0; pos < vb.vertices.size(); ++pos) {
                std::uint64_t digit =
                    (word >> (pos * static_cast<std::size_t>(c_added))) & ((1u << c_added) - 1);
                if (digit & (1u << j)) {
                    ts.push_back({static_cast<std::int32_t>(
                        old_to_new[static_cast<std::size_t>(vb.vertices[pos])])});
                }
            }
            if (!ts.empty()) rels[mark_name(m0 + j + 1)] = std::move(ts);
        }
        Signature lifted(base->signature().base_symbols(), c_total);
        Structure marked(lifted, induced.domain_size(), std::move(rels));
        int root = old_to_new[static_cast<std::size_t>(vb.vertices[static_cast<std::size_t>(
            vb.root_position)])];
        if (marked.domain_size() > canon.limit) {
            throw budget_error("ball too large to canonicalize: " +
                               std::to_string(marked.domain_size()) + " vertices > limit " +
                               std::to_string(canon.limit));
        }
        std::string key = canonical_form(marked, canon, root);
        auto known = cache.by_key.find(key);
        if (known != cache.by_key.end()) {
            cache.ids.emplace(packed, known->second);
            return known->second;
        }
        BallType type;
        type.r = r;
        type.c = c_total;
        type.key = key;
        std::vector<int> perm = canonical_permutation(marked, canon, root);
        type.ball = permute(marked, perm);
        type.root = 0;
        int id = static_cast<int>(cache.keys.size());
        cache.keys.push_back(key);
        cache.types.push_back(std::move(type));
        cache.ids.emplace(packed, id);
        cache.by_key.emplace(std::move(key), id);
        return id;
    }

    // The distribution of one lift given the full assignment word digits.
    // Returns sparse (local id, count), sorted by local id.
    std::vector<std::pair<int, int>> distribution_of(
        TypeCache& cache, const std::vector<std::uint32_t>& digit_of_vertex) const {
        std::vector<std::pair<int, int>> counts;
        for (int v = 0; v < n; ++v) {
            const auto& vb = balls[static_cast<std::size_t>(v)];
            std::uint64_t word = 0;
            for (std::size_t pos = vb.vertices.size(); pos-- > 0;) {
                word = (word << c_added) | digit_of_vertex[static_cast<std::size_t>(
                                              vb.vertices[pos])];
            }
            int id = type_of(cache, v, word);
            auto it = std::lower_bound(counts.begin(), counts.end(), std::make_pair(id, 0));
            if (it != counts.end() && it->first == id) {
                ++it->second;
            } else {
                counts.insert(it, {id, 1});
            }
        }
        return counts;
    }
};

// Content-addressed distribution: canonical type keys with multiplicities.
using ContentDist = std::vector<std::pair<std::string, int>>;

struct Harvest {
    std::map<ContentDist, bool> dists;
    std::map<std::string, BallType> types;
};

Harvest merge_harvest(Harvest acc, Harvest next) {
    for (auto& [k, v] : next.dists) acc.dists.emplace(std::move(k), v);
    for (auto& [k, v] : next.types) acc.types.emplace(k, std::move(v));
    return acc;
}

LiftStatSet assemble(int r, int c_total, int n, Harvest harvest) {
    LiftStatSet out;
    out.r = r;
    out.c = c_total;
    out.base_size = n;
    std::map<std::string, std::uint16_t> global_id;
    for (auto& [key, type] : harvest.types) {
        global_id.emplace(key, static_cast<std::uint16_t>(out.types.size()));
        out.types.push_back(std::move(type));
    }
    for (const auto& [content, unused] : harvest.dists) {
        (void)unused;
        LiftStatSet::Counts counts;
        counts.reserve(content.size());
        for (const auto& [key, count] : content) {
            counts.emplace_back(global_id.at(key), static_cast<std::uint16_t>(count));
        }
        std::sort(counts.begin(), counts.end());
        out.members.push_back(std::move(counts));
    }
    std::sort(out.members.begin(), out.members.end());
    return out;
}

} // namespace

LiftStatSet lift_stat_set(const Structure& s, int c, int r, SearchMode mode,
                          std::int64_t budget, std::uint64_t seed,
                          const CanonOptions& canon) {
    if (c < 0) throw validation_error("negative mark count");
    const int n = s.domain_size();
    if (n == 0) throw validation_error("lift statistics undefined on empty domain");
    if (n >= (1 << 12)) {
        throw budget_error("structure too large for the lift engine (domain >= 4096)");
    }
    LiftEngine engine;
    engine.base = &s;
    engine.c_added = c;
    engine.c_total = s.signature().marks() + c;
    engine.r = r;
    engine.canon = canon;
    engine.prepare();

    auto process_words = [&](LiftEngine::TypeCache& cache, Harvest& harvest,
                             const std::vector<std::uint32_t>& digits) {
        auto local = engine.distribution_of(cache, digits);
        ContentDist content;
        content.reserve(local.size());
        for (auto [id, count] : local) {
            content.emplace_back(cache.keys[static_cast<std::size_t>(id)], count);
        }
        std::sort(content.begin(), content.end());
        auto [it, inserted] = harvest.dists.emplace(std::move(content), true);
        if (inserted) {
            for (auto [id, count] : local) {
                (void)count;
                const auto& key = cache.keys[static_cast<std::size_t>(id)];
                harvest.types.emplace(key, cache.types[static_cast<std::size_t>(id)]);
            }
        }
    };

    Harvest harvest;
    if (mode == SearchMode::Exact) {
        Integer total_big = assignment_count(n, c);
        if (total_big > budget) {
            throw budget_error("lift enumeration needs (2^" + std::to_string(c) + ")^" +
                               std::to_string(n) + " = " + total_big.get_str() +
                               " assignments, budget is " + std::to_string(budget));
        }
        const std::int64_t total = total_big.get_si();
        auto work = [&](std::int64_t b, std::int64_t e) {
            LiftEngine::TypeCache cache;
            Harvest local;
            std::vector<std::uint32_t> digits(static_cast<std::size_t>(n), 0);
            // Local dedup on worker-local ids avoids rebuilding content
            // keys for repeated distributions.
            std::map<std::vector<std::pair<int, int>>, bool> seen_local;
            for (std::int64_t idx = b; idx < e; ++idx) {
                std::int64_t rem = idx;
                for (int v = n - 1; v >= 0; --v) {
                    digits[static_cast<std::size_t>(v)] =
                        static_cast<std::uint32_t>(rem & ((1 << c) - 1));
                    rem >>= c;
                }
                auto dist = engine.distribution_of(cache, digits);
                if (!seen_local.emplace(dist, true).second) continue;
                ContentDist content;
                content.reserve(dist.size());
                for (auto [id, count] : dist) {
                    content.emplace_back(cache.keys[static_cast<std::size_t>(id)], count);
                }
                std::sort(content.begin(), content.end());
                auto [it, inserted] = local.dists.emplace(std::move(content), true);
                if (inserted) {
                    for (auto [id, count] : dist) {
                        (void)count;
                        const auto& key = cache.keys[static_cast<std::size_t>(id)];
                        local.types.emplace(key, cache.types[static_cast<std::size_t>(id)]);
                    }
                }
            }
            return local;
        };
        harvest = parallel_chunk_reduce<Harvest>(0, total, {}, work, merge_harvest);
    } else {
        if (budget < 1) throw validation_error("sampled mode needs a positive budget");
        std::mt19937_64 rng(seed);
        std::vector<std::vector<std::uint32_t>> words;
        // The 2^c mark-constant lifts are always included so the sampled
        // set genuinely contains the constant colorings.
        for (std::uint32_t digit = 0; digit < (1u << c); ++digit) {
            words.emplace_back(static_cast<std::size_t>(n), digit);
        }
        std::uniform_int_distribution<std::uint32_t> dist(0, (1u << c) - 1);
        for (std::int64_t i = 0; i < budget; ++i) {
            std::vector<std::uint32_t> w(static_cast<std::size_t>(n));
            for (auto& d : w) d = dist(rng);
            words.push_back(std::move(w));
        }
        LiftEngine::TypeCache cache;
        for (const auto& w : words) process_words(cache, harvest, w);
    }
    return assemble(r, engine.c_total, n, std::move(harvest));
}

namespace {

// Integer TV between two members: sum |a_i * nb - b_i * na| over the joint
// support; the rational value is sum / (2 na nb).
std::int64_t tv_numerator(const LiftStatSet::Counts& a, int na,
                          const LiftStatSet::Counts& b, int nb) {
    std::int64_t sum = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j >= b.size() || (i < a.size() && a[i].first < b[j].first)) {
            sum += static_cast<std::int64_t>(a[i].second) * nb;
            ++i;
        } else if (i >= a.size() || b[j].first < a[i].first) {
            sum += static_cast<std::int64_t>(b[j].second) * na;
            ++j;
        } else {
            std::int64_t d = static_cast<std::int64_t>(a[i].second) * nb -
                             static_cast<std::int64_t>(b[j].second) * na;
            sum += d < 0 ? -d : d;
            ++i;
            ++j;
        }
    }
    return sum;
}

// Remaps a stat set's type indices into a joint table keyed by canonical
// type keys, so members of different sets become comparable.
std::vector<LiftStatSet::Counts> remap(const LiftStatSet& s,
                                       const std::map<std::string, std::uint16_t>& joint) {
    std::vector<std::uint16_t> to_joint(s.types.size());
    for (std::size_t i = 0; i < s.types.size(); ++i) {
        to_joint[i] = joint.at(s.types[i].key);
    }
    std::vector<LiftStatSet::Counts> out;
    out.reserve(s.members.size());
    for (const auto& m : s.members) {
        LiftStatSet::Counts counts;
        counts.reserve(m.size());
        for (auto [id, count] : m) counts.emplace_back(to_joint[id], count);
        std::sort(counts.begin(), counts.end());
        out.push_back(std::move(counts));
    }
    return out;
}

} // namespace

Rational hausdorff_distance(const LiftStatSet& a, const LiftStatSet& b) {
    if (a.r != b.r || a.c != b.c) {
        throw validation_error("Hausdorff distance needs matching radius and mark count");
    }
    if (a.members.empty() || b.members.empty()) {
        throw validation_error("Hausdorff distance of an empty stat set");
    }
    std::map<std::string, std::uint16_t> joint;
    for (const auto& t : a.types) joint.emplace(t.key, 0);
    for (const auto& t : b.types) joint.emplace(t.key, 0);
    std::uint16_t next = 0;
    for (auto& [key, id] : joint) id = next++;
    auto ma = remap(a, joint);
    auto mb = remap(b, joint);
    const int na = a.base_size, nb = b.base_size;

    // Directed sup-inf in integer arithmetic. Scaling: entries of `from`
    // weigh k/na, entries of `to` weigh k/nb; tv numerators are over the
    // common denominator na*nb.
    auto directed = [&](const std::vector<LiftStatSet::Counts>& from, int nfrom,
                        const std::vector<LiftStatSet::Counts>& to, int nto) {
        auto work = [&](std::int64_t lo, std::int64_t hi) {
            std::int64_t best = 0;
            for (std::int64_t i = lo; i < hi; ++i) {
                std::int64_t min_d = -1;
                for (const auto& y : to) {
                    std::int64_t d = tv_numerator(from[static_cast<std::size_t>(i)], nfrom, y, nto);
                    if (min_d < 0 || d < min_d) min_d = d;
                    // Once the minimum cannot raise the running maximum the
                    // exact value no longer matters.
                    if (min_d <= best) break;
                }
                if (min_d > best) best = min_d;
            }
            return best;
        };
        auto merge = [](std::int64_t x, std::int64_t y) { return x < y ? y : x; };
        return parallel_chunk_reduce<std::int64_t>(0, static_cast<std::int64_t>(from.size()),
                                                   0, work, merge);
    };
    std::int64_t dir_ab = directed(ma, na, mb, nb);
    std::int64_t dir_ba = directed(mb, nb, ma, na);
    std::int64_t numer = std::max(dir_ab, dir_ba);
    Rational out(Integer(static_cast<long>(numer)),
                 Integer(2) * na * nb);
    out.canonicalize();
    return out;
}

LiftHausdorffResult lift_hausdorff(const Structure& a, const Structure& b, int c, int r,
                                   SearchMode mode, std::int64_t budget,
                                   std::uint64_t seed, const CanonOptions& canon) {
    if (!(a.signature() == b.signature())) {
        throw validation_error("lift-Hausdorff distance requires matching signatures");
    }
    LiftStatSet sa = lift_stat_set(a, c, r, mode, budget, seed, canon);
    LiftStatSet sb = lift_stat_set(b, c, r, mode, budget, seed + 1, canon);
    LiftHausdorffResult out;
    out.value = hausdorff_distance(sa, sb);
    out.exact = mode == SearchMode::Exact;
    return out;
}

EpsilonNet epsilon_net(const Structure& s, int c, int r, const Rational& eps,
                       SearchMode mode, std::int64_t budget, std::uint64_t seed,
                       const CanonOptions& canon) {
    if (eps < 0) throw validation_error("eps must be non-negative");
    LiftStatSet all = lift_stat_set(s, c, r, mode, budget, seed, canon);
    const int n = all.base_size;
    const std::size_t m = all.members.size();
    // Greedy farthest point: start from the first member (members are
    // sorted, so this is deterministic), repeatedly add the member farthest
    // from the net until everything is covered within eps.
    std::vector<std::int64_t> min_d(m, -1);
    std::vector<std::size_t> chosen;
    std::vector<char> in_net(m, 0);
    auto add = [&](std::size_t idx) {
        chosen.push_back(idx);
        in_net[idx] = 1;
        for (std::size_t i = 0; i < m; ++i) {
            std::int64_t d = tv_numerator(all.members[i], n, all.members[idx], n);
            if (min_d[i] < 0 || d < min_d[i]) min_d[i] = d;
        }
    };
    add(0);
    Rational radius;
    const Integer denom = Integer(2) * n * n;
    while (true) {
        std::size_t far_idx = m;
        std::int64_t far_d = -1;
        for (std::size_t i = 0; i < m; ++i) {
            if (min_d[i] > far_d) {
                far_d = min_d[i];
                far_idx = i;
            }
        }
        radius = Rational(Integer(static_cast<long>(far_d)), denom);
        radius.canonicalize();
        if (radius <= eps || chosen.size() == m) break;
        add(far_idx);
    }
    EpsilonNet out;
    out.net.r = all.r;
    out.net.c = all.c;
    out.net.base_size = all.base_size;
    out.net.types = all.types;
    std::sort(chosen.begin(), chosen.end());
    for (auto idx : chosen) out.net.members.push_back(all.members[idx]);
    out.covering_radius = radius;
    return out;
}

} // namespace structlim
