#include "structlim/generate.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

#include "structlim/errors.hpp"

namespace structlim {

Signature graph_signature(int marks) { return Signature({{"E", 2}}, marks); }

namespace {

Structure graph_from_edges(int n, const std::vector<std::pair<int, int>>& edges, int marks) {
    std::vector<Tuple> tuples;
    std::set<std::pair<int, int>> seen;
    for (auto [u, v] : edges) {
        if (u == v) throw validation_error("loops are not allowed in graph generators");
        if (!seen.insert({u, v}).second) continue;
        seen.insert({v, u});
        tuples.push_back({static_cast<std::int32_t>(u), static_cast<std::int32_t>(v)});
        tuples.push_back({static_cast<std::int32_t>(v), static_cast<std::int32_t>(u)});
    }
    std::map<std::string, std::vector<Tuple>> rels;
    if (!tuples.empty()) rels["E"] = std::move(tuples);
    return Structure(graph_signature(marks), n, std::move(rels));
}

Structure random_regular(int n, int d, std::uint64_t seed, int marks) {
    if (d < 0 || d >= n) throw validation_error("random_regular needs 0 <= d < n");
    if ((static_cast<std::int64_t>(n) * d) % 2 != 0) {
        throw validation_error("random_regular needs n*d even");
    }
    std::mt19937_64 rng(seed);
    // Configuration model with rejection: pair up d stubs per vertex until
    // the matching is simple. Deterministic for a fixed seed.
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
        for (int v = 0; v < n; ++v) {
            for (int k = 0; k < d; ++k) stubs.push_back(v);
        }
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::set<std::pair<int, int>> seen;
        std::vector<std::pair<int, int>> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            int u = stubs[i], v = stubs[i + 1];
            if (u == v || seen.count({std::min(u, v), std::max(u, v)})) {
                ok = false;
                break;
            }
            seen.insert({std::min(u, v), std::max(u, v)});
            edges.emplace_back(u, v);
        }
        if (ok) return graph_from_edges(n, edges, marks);
    }
    throw error("random_regular failed to find a simple matching (try another seed)");
}

} // namespace

Structure generate(const GeneratorSpec& spec) {
    using Family = GeneratorSpec::Family;
    auto need_size = [&](std::size_t count) {
        if (spec.sizes.size() < count) {
            throw validation_error("generator needs " + std::to_string(count) +
                                   " size parameter(s)");
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (spec.sizes[i] < 0) throw validation_error("negative size parameter");
        }
    };
    switch (spec.family) {
        case Family::Path: {
            need_size(1);
            int n = spec.sizes[0];
            std::vector<std::pair<int, int>> edges;
            for (int v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
            return graph_from_edges(n, edges, spec.marks);
        }
        case Family::Cycle: {
            need_size(1);
            int n = spec.sizes[0];
            if (n < 3) throw validation_error("cycle needs at least 3 vertices");
            std::vector<std::pair<int, int>> edges;
            for (int v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
            return graph_from_edges(n, edges, spec.marks);
        }
        case Family::Complete: {
            need_size(1);
            int n = spec.sizes[0];
            std::vector<std::pair<int, int>> edges;
            for (int u = 0; u < n; ++u) {
                for (int v = u + 1; v < n; ++v) edges.emplace_back(u, v);
            }
            return graph_from_edges(n, edges, spec.marks);
        }
        case Family::Star: {
            need_size(1);
            int leaves = spec.sizes[0];
            std::vector<std::pair<int, int>> edges;
            for (int v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
            return graph_from_edges(leaves + 1, edges, spec.marks);
        }
        case Family::Grid: {
            need_size(2);
            int rows = spec.sizes[0], cols = spec.sizes[1];
            auto id = [&](int r, int c) { return r * cols + c; };
            std::vector<std::pair<int, int>> edges;
            for (int r = 0; r < rows; ++r) {
                for (int c = 0; c < cols; ++c) {
                    if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
                    if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
                }
            }
            return graph_from_edges(rows * cols, edges, spec.marks);
        }
        case Family::Edgeless: {
            need_size(1);
            return graph_from_edges(spec.sizes[0], {}, spec.marks);
        }
        case Family::DisjointUnion: {
            if (spec.parts.empty()) {
                throw validation_error("disjoint_union needs at least one part");
            }
            Structure acc = generate(spec.parts.front());
            for (std::size_t i = 1; i < spec.parts.size(); ++i) {
                acc = disjoint_union(acc, generate(spec.parts[i]));
            }
            if (spec.marks > 0) {
                Signature sig = acc.signature().with_marks(spec.marks);
                std::map<std::string, std::vector<Tuple>> rels;
                for (int si = 0; si < acc.signature().symbol_count(); ++si) {
                    if (!acc.tuples(si).empty()) {
                        rels[acc.signature().name(si)] = acc.tuples(si);
                    }
                }
                acc = Structure(sig, acc.domain_size(), std::move(rels));
            }
            return acc;
        }
        case Family::RandomRegular: {
            need_size(1);
            return random_regular(spec.sizes[0], spec.degree, spec.seed, spec.marks);
        }
    }
    throw validation_error("unknown generator family");
}

GeneratorSpec parse_generator_term(const std::string& term) {
    std::vector<std::string> parts;
    std::stringstream ss(term);
    std::string piece;
    while (std::getline(ss, piece, ':')) parts.push_back(piece);
    if (parts.empty()) throw validation_error("empty generator term");

    GeneratorSpec spec;
    const std::string& fam = parts[0];
    auto num = [&](std::size_t i) {
        if (i >= parts.size()) {
            throw validation_error("generator term \"" + term + "\" is missing parameters");
        }
        try {
            return std::stoi(parts[i]);
        } catch (const std::exception&) {
            throw validation_error("bad number in generator term \"" + term + "\"");
        }
    };
    using Family = GeneratorSpec::Family;
    if (fam == "path") {
        spec.family = Family::Path;
        spec.sizes = {num(1)};
    } else if (fam == "cycle") {
        spec.family = Family::Cycle;
        spec.sizes = {num(1)};
    } else if (fam == "complete") {
        spec.family = Family::Complete;
        spec.sizes = {num(1)};
    } else if (fam == "star") {
        spec.family = Family::Star;
        spec.sizes = {num(1)};
    } else if (fam == "grid") {
        spec.family = Family::Grid;
        spec.sizes = {num(1), num(2)};
    } else if (fam == "edgeless") {
        spec.family = Family::Edgeless;
        spec.sizes = {num(1)};
    } else if (fam == "random_regular") {
        spec.family = Family::RandomRegular;
        spec.sizes = {num(1)};
        spec.degree = num(2);
        spec.seed = static_cast<std::uint64_t>(num(3));
    } else {
        throw validation_error("unknown generator family \"" + fam + "\"");
    }
    return spec;
}

} // namespace structlim
