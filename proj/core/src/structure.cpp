#include "structlim/structure.hpp"

#include <algorithm>
#include <mutex>
#include <set>
#include <sstream>

#include "structlim/errors.hpp"

namespace structlim {

namespace {

std::string tuple_to_string(const Tuple& t) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ",";
        os << t[i];
    }
    os << "]";
    return os.str();
}

} // namespace

struct Structure::Shared {
    std::vector<std::vector<Tuple>> rel; // per symbol, sorted unique
    mutable std::once_flag gaifman_once;
    mutable GaifmanGraph gaifman;
};

Structure::Structure(Signature sig, int domain_size,
                     std::map<std::string, std::vector<Tuple>> relations)
    : sig_(std::move(sig)), n_(domain_size), shared_(std::make_shared<Shared>()) {
    if (n_ < 0) throw validation_error("negative domain size");
    shared_->rel.resize(static_cast<std::size_t>(sig_.symbol_count()));
    for (auto& [name, tuples] : relations) {
        int idx = sig_.index_of(name);
        if (idx < 0) throw validation_error("unknown relation symbol \"" + name + "\"");
        int arity = sig_.arity(idx);
        auto& slot = shared_->rel[static_cast<std::size_t>(idx)];
        for (auto& t : tuples) {
            if (static_cast<int>(t.size()) != arity) {
                throw validation_error("relation \"" + name + "\": tuple " +
                                       tuple_to_string(t) + " has width " +
                                       std::to_string(t.size()) + ", expected arity " +
                                       std::to_string(arity));
            }
            for (auto e : t) {
                if (e < 0 || e >= n_) {
                    throw validation_error("relation \"" + name + "\": tuple " +
                                           tuple_to_string(t) + " entry " +
                                           std::to_string(e) + " out of range (domain " +
                                           std::to_string(n_) + ")");
                }
            }
        }
        slot = std::move(tuples);
        std::sort(slot.begin(), slot.end());
        auto dup = std::adjacent_find(slot.begin(), slot.end());
        if (dup != slot.end()) {
            throw validation_error("relation \"" + name + "\": duplicate tuple " +
                                   tuple_to_string(*dup));
        }
    }
}

const std::vector<Tuple>& Structure::tuples(int symbol_index) const {
    static const std::vector<Tuple> kEmpty;
    if (!shared_ || symbol_index < 0 ||
        symbol_index >= static_cast<int>(shared_->rel.size())) {
        return kEmpty;
    }
    return shared_->rel[static_cast<std::size_t>(symbol_index)];
}

bool Structure::has_tuple(int symbol_index, const Tuple& t) const {
    const auto& ts = tuples(symbol_index);
    return std::binary_search(ts.begin(), ts.end(), t);
}

VertexSet Structure::unary_as_set(int symbol_index) const {
    if (sig_.arity(symbol_index) != 1) {
        throw validation_error("symbol \"" + sig_.name(symbol_index) + "\" is not unary");
    }
    VertexSet out(n_);
    for (const auto& t : tuples(symbol_index)) out.add(t[0]);
    return out;
}

const GaifmanGraph& Structure::gaifman() const {
    std::call_once(shared_->gaifman_once, [this]() {
        std::vector<std::set<std::int32_t>> nbr(static_cast<std::size_t>(n_));
        for (int si = 0; si < sig_.symbol_count(); ++si) {
            for (const auto& t : tuples(si)) {
                for (std::size_t i = 0; i < t.size(); ++i) {
                    for (std::size_t j = i + 1; j < t.size(); ++j) {
                        if (t[i] == t[j]) continue;
                        nbr[static_cast<std::size_t>(t[i])].insert(t[j]);
                        nbr[static_cast<std::size_t>(t[j])].insert(t[i]);
                    }
                }
            }
        }
        shared_->gaifman.adj.assign(static_cast<std::size_t>(n_), {});
        for (int v = 0; v < n_; ++v) {
            auto& row = shared_->gaifman.adj[static_cast<std::size_t>(v)];
            row.assign(nbr[static_cast<std::size_t>(v)].begin(),
                       nbr[static_cast<std::size_t>(v)].end());
        }
    });
    return shared_->gaifman;
}

bool Structure::operator==(const Structure& other) const {
    if (!(sig_ == other.sig_) || n_ != other.n_) return false;
    for (int si = 0; si < sig_.symbol_count(); ++si) {
        if (tuples(si) != other.tuples(si)) return false;
    }
    return true;
}

VertexSet ball(const Structure& s, const VertexSet& centers, int d) {
    if (centers.universe_size() != s.domain_size()) {
        throw validation_error("vertex set does not match the structure's domain");
    }
    VertexSet current = centers;
    if (d <= 0) return current;
    const auto& g = s.gaifman();
    VertexSet frontier = centers;
    for (int step = 0; step < d; ++step) {
        VertexSet next(s.domain_size());
        bool grew = false;
        for (int v : frontier.members()) {
            for (auto u : g.adj[static_cast<std::size_t>(v)]) {
                if (!current.contains(u)) {
                    current.add(u);
                    next.add(u);
                    grew = true;
                }
            }
        }
        if (!grew) break;
        frontier = next;
    }
    return current;
}

VertexSet ball_of_vertex(const Structure& s, int v, int d) {
    VertexSet c(s.domain_size());
    c.add(v);
    return ball(s, c, d);
}

Rational measure(const Structure& s, const VertexSet& x) {
    if (s.domain_size() == 0) throw validation_error("measure undefined on empty domain");
    Rational q(x.count(), s.domain_size());
    q.canonicalize();
    return q;
}

VertexSet boundary(const Structure& s, const VertexSet& x) {
    if (x.universe_size() != s.domain_size()) {
        throw validation_error("vertex set does not match the structure's domain");
    }
    VertexSet out(s.domain_size());
    const auto& g = s.gaifman();
    for (int v = 0; v < s.domain_size(); ++v) {
        bool in_x = x.contains(v);
        for (auto u : g.adj[static_cast<std::size_t>(v)]) {
            if (x.contains(u) != in_x) {
                out.add(v);
                out.add(u);
            }
        }
    }
    return out;
}

std::pair<std::vector<int>, int> connected_components(const Structure& s) {
    const int n = s.domain_size();
    std::vector<int> comp(static_cast<std::size_t>(n), -1);
    const auto& g = s.gaifman();
    int count = 0;
    std::vector<int> stack;
    for (int v = 0; v < n; ++v) {
        if (comp[static_cast<std::size_t>(v)] != -1) continue;
        comp[static_cast<std::size_t>(v)] = count;
        stack.push_back(v);
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (auto w : g.adj[static_cast<std::size_t>(u)]) {
                if (comp[static_cast<std::size_t>(w)] == -1) {
                    comp[static_cast<std::size_t>(w)] = count;
                    stack.push_back(w);
                }
            }
        }
        ++count;
    }
    return {comp, count};
}

int max_degree(const Structure& s) {
    int best = 0;
    const auto& g = s.gaifman();
    for (const auto& row : g.adj) best = std::max(best, static_cast<int>(row.size()));
    return best;
}

Structure induced_substructure(const Structure& s, const VertexSet& vertices,
                               std::vector<int>* old_to_new) {
    if (vertices.universe_size() != s.domain_size()) {
        throw validation_error("vertex set does not match the structure's domain");
    }
    std::vector<int> map(static_cast<std::size_t>(s.domain_size()), -1);
    int next = 0;
    for (int v : vertices.members()) map[static_cast<std::size_t>(v)] = next++;
    std::map<std::string, std::vector<Tuple>> rels;
    const auto& sig = s.signature();
    for (int si = 0; si < sig.symbol_count(); ++si) {
        std::vector<Tuple> kept;
        for (const auto& t : s.tuples(si)) {
            Tuple mapped;
            mapped.reserve(t.size());
            bool inside = true;
            for (auto e : t) {
                int m = map[static_cast<std::size_t>(e)];
                if (m < 0) {
                    inside = false;
                    break;
                }
                mapped.push_back(m);
            }
            if (inside) kept.push_back(std::move(mapped));
        }
        if (!kept.empty()) rels[sig.name(si)] = std::move(kept);
    }
    if (old_to_new) *old_to_new = map;
    return Structure(sig, next, std::move(rels));
}

Structure permute(const Structure& s, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != s.domain_size()) {
        throw validation_error("permutation size does not match the domain");
    }
    std::map<std::string, std::vector<Tuple>> rels;
    const auto& sig = s.signature();
    for (int si = 0; si < sig.symbol_count(); ++si) {
        std::vector<Tuple> mapped;
        for (const auto& t : s.tuples(si)) {
            Tuple m;
            m.reserve(t.size());
            for (auto e : t) m.push_back(perm[static_cast<std::size_t>(e)]);
            mapped.push_back(std::move(m));
        }
        if (!mapped.empty()) rels[sig.name(si)] = std::move(mapped);
    }
    return Structure(sig, s.domain_size(), std::move(rels));
}

Structure disjoint_union(const Structure& a, const Structure& b) {
    if (!(a.signature() == b.signature())) {
        throw validation_error("disjoint union requires matching signatures");
    }
    const int offset = a.domain_size();
    std::map<std::string, std::vector<Tuple>> rels;
    const auto& sig = a.signature();
    for (int si = 0; si < sig.symbol_count(); ++si) {
        std::vector<Tuple> merged = a.tuples(si);
        for (const auto& t : b.tuples(si)) {
            Tuple m;
            m.reserve(t.size());
            for (auto e : t) m.push_back(e + offset);
            merged.push_back(std::move(m));
        }
        if (!merged.empty()) rels[sig.name(si)] = std::move(merged);
    }
    return Structure(sig, a.domain_size() + b.domain_size(), std::move(rels));
}

} // namespace structlim
