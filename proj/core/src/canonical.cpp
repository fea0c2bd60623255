#include "structlim/canonical.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "structlim/errors.hpp"

namespace structlim {

namespace {

// The canonical form is the lexicographically minimal "row encoding" over
// all permutations of the domain. Row k describes the tuples that become
// fully placed when the vertex with new label k is placed, so the encoding
// grows prefix-monotonically during the search and branches can be pruned
// by comparing against the best encoding found so far.
//
// Rows are ordered so that rows with more tuples come first; this makes the
// search prefer placements adjacent to already placed vertices, which is
// what makes the pruning effective on sparse structures.

struct SearchContext {
    const Structure* s = nullptr;
    int n = 0;
    std::vector<int> color;                              // WL color rank per vertex
    std::vector<std::vector<std::pair<int, int>>> incident; // vertex -> (symbol, tuple idx)
    std::vector<std::vector<int>> swap_adj;              // swap-automorphism pairs

    std::vector<int> pos;       // old vertex -> new label, -1 if unplaced
    std::vector<int> placed;    // new label -> old vertex
    std::vector<std::string> best_rows;
    std::vector<int> best_perm; // old -> new
    bool have_best = false;
};

void append_u16(std::string& out, int v) {
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

// Iterated refinement of an isomorphism-invariant vertex coloring. Colors
// are ranked by the sorted descriptor strings, so isomorphic structures get
// identical color assignments up to the isomorphism.
std::vector<int> wl_colors(const Structure& s, std::optional<int> root) {
    const int n = s.domain_size();
    const auto& sig = s.signature();
    std::vector<std::string> desc(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        std::ostringstream os;
        os << (root && *root == v ? "R" : "-");
        for (int si = 0; si < sig.symbol_count(); ++si) {
            int arity = sig.arity(si);
            std::vector<int> at_pos(static_cast<std::size_t>(arity), 0);
            for (const auto& t : s.tuples(si)) {
                for (int i = 0; i < arity; ++i) {
                    if (t[static_cast<std::size_t>(i)] == v) ++at_pos[static_cast<std::size_t>(i)];
                }
            }
            os << "|";
            for (int c : at_pos) os << c << ",";
        }
        desc[static_cast<std::size_t>(v)] = os.str();
    }
    auto rank = [&](const std::vector<std::string>& d) {
        std::vector<std::string> sorted = d;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> c(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            c[static_cast<std::size_t>(v)] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), d[static_cast<std::size_t>(v)]) -
                sorted.begin());
        }
        return std::make_pair(c, static_cast<int>(sorted.size()));
    };
    auto [color, classes] = rank(desc);
    while (classes < n) {
        std::vector<std::string> next(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) {
            std::vector<std::string> records;
            for (int si = 0; si < sig.symbol_count(); ++si) {
                for (const auto& t : s.tuples(si)) {
                    bool involves = false;
                    for (auto e : t) {
                        if (e == v) { involves = true; break; }
                    }
                    if (!involves) continue;
                    std::ostringstream os;
                    os << si << ":";
                    for (auto e : t) {
                        os << (e == v ? -1 : color[static_cast<std::size_t>(e)]) << ",";
                    }
                    records.push_back(os.str());
                }
            }
            std::sort(records.begin(), records.end());
            std::ostringstream os;
            os << color[static_cast<std::size_t>(v)] << "#";
            for (const auto& r : records) os << r << ";";
            next[static_cast<std::size_t>(v)] = os.str();
        }
        auto [ncolor, nclasses] = rank(next);
        if (nclasses == classes) break;
        color = std::move(ncolor);
        classes = nclasses;
    }
    return color;
}

// Transpositions (u w) that map every relation onto itself are full
// automorphisms fixing everything else, so at any point of the search where
// both u and w are unplaced their subtrees produce the same minimum and
// only one needs exploring.
std::vector<std::vector<int>> swap_automorphism_pairs(const Structure& s) {
    const int n = s.domain_size();
    const auto& sig = s.signature();
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int u = 0; u < n; ++u) {
        for (int w = u + 1; w < n; ++w) {
            bool ok = true;
            for (int si = 0; si < sig.symbol_count() && ok; ++si) {
                const auto& ts = s.tuples(si);
                for (const auto& t : ts) {
                    Tuple swapped = t;
                    bool touched = false;
                    for (auto& e : swapped) {
                        if (e == u) { e = w; touched = true; }
                        else if (e == w) { e = u; touched = true; }
                    }
                    if (touched && !std::binary_search(ts.begin(), ts.end(), swapped)) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) {
                adj[static_cast<std::size_t>(u)].push_back(w);
                adj[static_cast<std::size_t>(w)].push_back(u);
            }
        }
    }
    return adj;
}

std::string encode_row(SearchContext& ctx, int v, int depth) {
    std::vector<std::pair<int, Tuple>> completed;
    for (auto [si, ti] : ctx.incident[static_cast<std::size_t>(v)]) {
        const auto& t = ctx.s->tuples(si)[static_cast<std::size_t>(ti)];
        Tuple relabeled;
        relabeled.reserve(t.size());
        bool all_placed = true;
        for (auto e : t) {
            int p = e == v ? depth : ctx.pos[static_cast<std::size_t>(e)];
            if (p < 0) { all_placed = false; break; }
            relabeled.push_back(p);
        }
        if (all_placed) completed.emplace_back(si, std::move(relabeled));
    }
    std::sort(completed.begin(), completed.end());
    completed.erase(std::unique(completed.begin(), completed.end()), completed.end());
    std::string row;
    append_u16(row, ctx.color[static_cast<std::size_t>(v)]);
    append_u16(row, 0xffff - static_cast<int>(completed.size()));
    for (const auto& [si, t] : completed) {
        row.push_back(static_cast<char>(si));
        for (auto e : t) row.push_back(static_cast<char>(e));
    }
    return row;
}

// equal_so_far: the current prefix of rows equals the best prefix. When
// false the prefix is already strictly smaller than best.
void search(SearchContext& ctx, int depth, std::vector<std::string>& rows, bool equal_so_far) {
    if (depth == ctx.n) {
        if (!ctx.have_best || !equal_so_far) {
            ctx.best_rows = rows;
            ctx.best_perm = ctx.pos;
            ctx.have_best = true;
        }
        return;
    }
    // Candidates: unplaced vertices, one representative per component of the
    // swap-automorphism graph restricted to unplaced vertices.
    std::vector<int> candidates;
    {
        std::vector<char> seen(static_cast<std::size_t>(ctx.n), 0);
        for (int v = 0; v < ctx.n; ++v) {
            if (ctx.pos[static_cast<std::size_t>(v)] != -1 || seen[static_cast<std::size_t>(v)]) continue;
            candidates.push_back(v);
            // Flood the swap component so later members are skipped.
            std::vector<int> stack{v};
            seen[static_cast<std::size_t>(v)] = 1;
            while (!stack.empty()) {
                int u = stack.back();
                stack.pop_back();
                for (int w : ctx.swap_adj[static_cast<std::size_t>(u)]) {
                    if (ctx.pos[static_cast<std::size_t>(w)] == -1 && !seen[static_cast<std::size_t>(w)]) {
                        seen[static_cast<std::size_t>(w)] = 1;
                        stack.push_back(w);
                    }
                }
            }
        }
    }
    // Only candidates achieving the minimal row can start a minimal
    // completion (siblings share the prefix, so a larger row is dominated).
    std::vector<std::pair<std::string, int>> scored;
    scored.reserve(candidates.size());
    for (int v : candidates) scored.emplace_back(encode_row(ctx, v, depth), v);
    std::sort(scored.begin(), scored.end());
    const std::string& min_row = scored.front().first;
    for (const auto& [row, v] : scored) {
        if (row != min_row) break;
        bool next_equal = equal_so_far;
        if (ctx.have_best && equal_so_far) {
            int cmp = row.compare(ctx.best_rows[static_cast<std::size_t>(depth)]);
            if (cmp > 0) break; // every remaining candidate row is >= this one
            if (cmp < 0) next_equal = false;
        }
        ctx.pos[static_cast<std::size_t>(v)] = depth;
        rows.push_back(row);
        search(ctx, depth + 1, rows, next_equal);
        rows.pop_back();
        ctx.pos[static_cast<std::size_t>(v)] = -1;
    }
}

std::string header_for(const Structure& s, bool rooted) {
    std::ostringstream os;
    const auto& sig = s.signature();
    os << "n=" << s.domain_size() << ";sig=";
    for (const auto& sym : sig.base_symbols()) os << sym.name << ":" << sym.arity << ",";
    os << ";marks=" << sig.marks() << ";rooted=" << (rooted ? 1 : 0) << ";";
    return os.str();
}

SearchContext run_search(const Structure& s, const CanonOptions& options,
                         std::optional<int> root) {
    const int n = s.domain_size();
    if (n > options.limit) {
        throw budget_error("canonicalization limit exceeded: domain " + std::to_string(n) +
                           " > limit " + std::to_string(options.limit));
    }
    if (root && (*root < 0 || *root >= n)) {
        throw validation_error("root vertex out of range");
    }
    SearchContext ctx;
    ctx.s = &s;
    ctx.n = n;
    ctx.color = wl_colors(s, root);
    ctx.incident.assign(static_cast<std::size_t>(n), {});
    const auto& sig = s.signature();
    for (int si = 0; si < sig.symbol_count(); ++si) {
        const auto& ts = s.tuples(si);
        for (int ti = 0; ti < static_cast<int>(ts.size()); ++ti) {
            Tuple sorted = ts[static_cast<std::size_t>(ti)];
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (auto v : sorted) {
                ctx.incident[static_cast<std::size_t>(v)].emplace_back(si, ti);
            }
        }
    }
    ctx.swap_adj = swap_automorphism_pairs(s);
    ctx.pos.assign(static_cast<std::size_t>(n), -1);
    std::vector<std::string> rows;
    if (root) {
        // The root is pinned to label 0.
        std::string row = encode_row(ctx, *root, 0);
        ctx.pos[static_cast<std::size_t>(*root)] = 0;
        rows.push_back(row);
        search(ctx, 1, rows, true);
    } else {
        search(ctx, 0, rows, true);
    }
    return ctx;
}

} // namespace

std::string canonical_form(const Structure& s, const CanonOptions& options,
                           std::optional<int> root) {
    SearchContext ctx = run_search(s, options, root);
    std::string out = header_for(s, root.has_value());
    for (const auto& row : ctx.best_rows) {
        append_u16(out, static_cast<int>(row.size()));
        out += row;
    }
    return out;
}

std::vector<int> canonical_permutation(const Structure& s, const CanonOptions& options,
                                       std::optional<int> root) {
    if (s.domain_size() == 0) return {};
    SearchContext ctx = run_search(s, options, root);
    return ctx.best_perm;
}

} // namespace structlim
