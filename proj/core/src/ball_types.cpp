#include "structlim/ball_types.hpp"

#include <algorithm>
#include <map>

#include "structlim/errors.hpp"
#include "structlim/parallel.hpp"

namespace structlim {

const Rational* BallDistribution::weight_of(const std::string& key) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), key,
                               [](const auto& e, const std::string& k) { return e.first.key < k; });
    if (it == entries.end() || it->first.key != key) return nullptr;
    return &it->second;
}

namespace {

// Restricts a structure to the base symbols plus the first c marks. Marks
// beyond the structure's signature are empty.
Structure with_mark_budget(const Structure& s, int c) {
    Signature sig(s.signature().base_symbols(), c);
    std::map<std::string, std::vector<Tuple>> rels;
    for (int si = 0; si < s.signature().symbol_count(); ++si) {
        if (s.signature().is_mark(si) && s.signature().mark_number(si) > c) continue;
        if (!s.tuples(si).empty()) rels[s.signature().name(si)] = s.tuples(si);
    }
    return Structure(sig, s.domain_size(), std::move(rels));
}

} // namespace

BallType ball_type_of(const Structure& s, int vertex, int r, int c,
                      const CanonOptions& canon) {
    if (vertex < 0 || vertex >= s.domain_size()) {
        throw validation_error("root vertex out of range");
    }
    VertexSet members = ball_of_vertex(s, vertex, r);
    std::vector<int> old_to_new;
    Structure induced = induced_substructure(s, members, &old_to_new);
    Structure colored = with_mark_budget(induced, c);
    int root = old_to_new[static_cast<std::size_t>(vertex)];
    if (colored.domain_size() > canon.limit) {
        throw budget_error("ball too large to canonicalize: " +
                           std::to_string(colored.domain_size()) + " vertices > limit " +
                           std::to_string(canon.limit));
    }
    std::vector<int> perm = canonical_permutation(colored, canon, root);
    BallType out;
    out.r = r;
    out.c = c;
    out.ball = permute(colored, perm);
    out.root = 0;
    out.key = canonical_form(colored, canon, root);
    return out;
}

BallDistribution ball_distribution(const Structure& s, int r, int c,
                                   const CanonOptions& canon) {
    const int n = s.domain_size();
    if (n == 0) throw validation_error("ball distribution undefined on empty domain");
    using Counts = std::map<std::string, std::pair<BallType, long>>;
    auto work = [&](std::int64_t b, std::int64_t e) {
        Counts local;
        for (std::int64_t v = b; v < e; ++v) {
            BallType t = ball_type_of(s, static_cast<int>(v), r, c, canon);
            std::string key = t.key;
            auto it = local.find(key);
            if (it == local.end()) {
                local.emplace(std::move(key), std::make_pair(std::move(t), 1L));
            } else {
                ++it->second.second;
            }
        }
        return local;
    };
    auto merge = [](Counts acc, Counts next) {
        for (auto& [key, entry] : next) {
            auto it = acc.find(key);
            if (it == acc.end()) {
                acc.emplace(key, std::move(entry));
            } else {
                it->second.second += entry.second;
            }
        }
        return acc;
    };
    Counts counts = parallel_chunk_reduce<Counts>(0, n, {}, work, merge);
    BallDistribution out;
    out.r = r;
    out.c = c;
    for (auto& [key, entry] : counts) {
        Rational w(entry.second, n);
        w.canonicalize();
        out.entries.emplace_back(std::move(entry.first), std::move(w));
    }
    return out;
}

Rational tv_distance(const BallDistribution& a, const BallDistribution& b) {
    if (a.r != b.r || a.c != b.c) {
        throw validation_error("total variation distance needs matching radius and mark count");
    }
    Rational total = 0;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j >= b.entries.size() ||
            (i < a.entries.size() && a.entries[i].first.key < b.entries[j].first.key)) {
            total += a.entries[i].second;
            ++i;
        } else if (i >= a.entries.size() || b.entries[j].first.key < a.entries[i].first.key) {
            total += b.entries[j].second;
            ++j;
        } else {
            total += abs(a.entries[i].second - b.entries[j].second);
            ++i;
            ++j;
        }
    }
    total /= 2;
    total.canonicalize();
    return total;
}

BallDistribution shadow_projection(const BallDistribution& d, int c_prime,
                                   const CanonOptions& canon) {
    if (c_prime > d.c) {
        throw validation_error("shadow projection cannot add marks");
    }
    if (c_prime == d.c) return d;
    std::map<std::string, std::pair<BallType, Rational>> merged;
    for (const auto& [type, weight] : d.entries) {
        Structure reduced = with_mark_budget(type.ball, c_prime);
        std::vector<int> perm = canonical_permutation(reduced, canon, type.root);
        BallType t;
        t.r = d.r;
        t.c = c_prime;
        t.ball = permute(reduced, perm);
        t.root = 0;
        t.key = canonical_form(reduced, canon, type.root);
        std::string key = t.key;
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(std::move(key), std::make_pair(std::move(t), weight));
        } else {
            it->second.second += weight;
        }
    }
    BallDistribution out;
    out.r = d.r;
    out.c = c_prime;
    for (auto& [key, entry] : merged) {
        entry.second.canonicalize();
        out.entries.emplace_back(std::move(entry.first), std::move(entry.second));
    }
    return out;
}

} // namespace structlim
