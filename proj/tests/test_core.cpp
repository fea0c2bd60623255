#include <doctest.h>

#include <random>

#include "naive.hpp"
#include "random_inputs.hpp"
#include "structlim/canonical.hpp"
#include "structlim/errors.hpp"
#include "structlim/generate.hpp"
#include "structlim/structure.hpp"

using namespace structlim;

namespace {

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

VertexSet set_of(const Structure& s, std::initializer_list<int> members) {
    VertexSet out(s.domain_size());
    for (int v : members) out.add(v);
    return out;
}

} // namespace

TEST_CASE("gaifman adjacency") {
    Structure k2 = gen("complete:2");
    const auto& g = k2.gaifman();
    CHECK(g.adj[0] == std::vector<std::int32_t>{1});
    CHECK(g.adj[1] == std::vector<std::int32_t>{0});

    Structure e3 = gen("edgeless:3");
    for (const auto& row : e3.gaifman().adj) CHECK(row.empty());

    // A ternary tuple makes its entries pairwise adjacent.
    Signature sig({{"R", 3}}, 0);
    Structure tern(sig, 3, {{"R", {{0, 1, 2}}}});
    CHECK(tern.gaifman().adj[0] == std::vector<std::int32_t>{1, 2});
    CHECK(tern.gaifman().adj[1] == std::vector<std::int32_t>{0, 2});
    CHECK(tern.gaifman().adj[2] == std::vector<std::int32_t>{0, 1});
}

TEST_CASE("balls") {
    Structure c8 = gen("cycle:8");
    CHECK(ball(c8, set_of(c8, {0}), 1) == set_of(c8, {7, 0, 1}));
    CHECK(ball(c8, set_of(c8, {0, 3}), 0) == set_of(c8, {0, 3}));
    Structure k5 = gen("complete:5");
    CHECK(ball(k5, set_of(k5, {2}), 1).count() == 5);
}

TEST_CASE("ball composition invariant") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        Structure s = testing::random_bounded_degree_graph(rng, 10, 3, 0);
        VertexSet x(s.domain_size());
        std::uniform_int_distribution<int> pick(0, s.domain_size() - 1);
        x.add(pick(rng));
        if (s.domain_size() > 2) x.add(pick(rng));
        for (int d = 0; d <= 4; ++d) {
            CHECK(ball(s, x, d + 1) == ball(s, ball(s, x, d), 1));
        }
    }
}

TEST_CASE("measure") {
    Structure s = gen("edgeless:5");
    CHECK(measure(s, set_of(s, {0, 3})) == Rational(2, 5));
    CHECK(measure(s, VertexSet(5)) == 0);
    CHECK(measure(s, VertexSet(5).complement()) == 1);
    Structure empty(graph_signature(), 0, {});
    CHECK_THROWS_AS(measure(empty, VertexSet(0)), validation_error);
}

TEST_CASE("measure additivity on disjoint sets") {
    std::mt19937_64 rng(11);
    Structure s = gen("cycle:9");
    for (int trial = 0; trial < 30; ++trial) {
        VertexSet x(9), y(9);
        std::uniform_int_distribution<int> pick(0, 8);
        for (int i = 0; i < 3; ++i) x.add(pick(rng));
        for (int v = 0; v < 9; ++v) {
            if (!x.contains(v) && pick(rng) > 4) y.add(v);
        }
        CHECK(measure(s, x.union_with(y)) == measure(s, x) + measure(s, y));
    }
}

TEST_CASE("boundary") {
    Structure p4 = gen("path:4");
    CHECK(boundary(p4, set_of(p4, {0, 1})) == set_of(p4, {1, 2}));
    CHECK(boundary(p4, VertexSet(4)) == VertexSet(4));
    CHECK(boundary(p4, VertexSet(4).complement()) == VertexSet(4));
}

TEST_CASE("boundary within one step of both sides") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        Structure s = testing::random_bounded_degree_graph(rng, 9, 3, 0);
        VertexSet x(s.domain_size());
        std::uniform_int_distribution<int> pick(0, 1);
        for (int v = 0; v < s.domain_size(); ++v) {
            if (pick(rng)) x.add(v);
        }
        VertexSet b = boundary(s, x);
        CHECK(b.is_subset_of(ball(s, x, 1).union_with(ball(s, x.complement(), 1))));
    }
}

TEST_CASE("connected components") {
    Structure two_k3 = generate([] {
        GeneratorSpec spec;
        spec.family = GeneratorSpec::Family::DisjointUnion;
        spec.parts = {parse_generator_term("complete:3"), parse_generator_term("complete:3")};
        return spec;
    }());
    auto [comp, count] = connected_components(two_k3);
    CHECK(count == 2);
    CHECK(comp == std::vector<int>{0, 0, 0, 1, 1, 1});

    auto [c8_comp, c8_count] = connected_components(gen("cycle:8"));
    CHECK(c8_count == 1);

    auto [e4_comp, e4_count] = connected_components(gen("edgeless:4"));
    CHECK(e4_count == 4);
}

TEST_CASE("max degree") {
    CHECK(max_degree(gen("cycle:8")) == 2);
    CHECK(max_degree(gen("complete:5")) == 4);
    CHECK(max_degree(gen("edgeless:4")) == 0);
}

TEST_CASE("canonical form basics") {
    Structure c3 = gen("cycle:3");
    Structure c3_relabeled = permute(c3, {2, 0, 1});
    CHECK(canonical_form(c3) == canonical_form(c3_relabeled));

    CHECK(canonical_form(gen("cycle:4")) != canonical_form(gen("path:4")));

    Structure two_k3 = disjoint_union(gen("complete:3"), gen("complete:3"));
    CHECK(canonical_form(gen("cycle:6")) != canonical_form(two_k3));
}

TEST_CASE("canonical form is relabeling invariant") {
    std::mt19937_64 rng(17);
    std::vector<Structure> corpus = {
        gen("cycle:6"), gen("path:7"),     gen("complete:5"),
        gen("star:4"),  gen("grid:2:3"),   gen("random_regular:8:3:5"),
        testing::random_bounded_degree_graph(rng, 9, 3, 1),
    };
    for (const auto& s : corpus) {
        std::string reference = canonical_form(s);
        std::vector<int> perm(static_cast<std::size_t>(s.domain_size()));
        std::iota(perm.begin(), perm.end(), 0);
        for (int trial = 0; trial < 100; ++trial) {
            std::shuffle(perm.begin(), perm.end(), rng);
            CHECK(canonical_form(permute(s, perm)) == reference);
        }
    }
}

TEST_CASE("canonical form matches the naive permutation minimum partition") {
    // The encodings differ, but equality classes must agree with the naive
    // full-permutation canonicalizer on a small corpus.
    std::mt19937_64 rng(19);
    std::vector<Structure> corpus;
    for (int i = 0; i < 12; ++i) {
        corpus.push_back(testing::random_bounded_degree_graph(rng, 6, 3, 0));
    }
    for (const auto& a : corpus) {
        for (const auto& b : corpus) {
            if (a.domain_size() != b.domain_size()) continue;
            bool naive_equal = naive::canonical_key(a) == naive::canonical_key(b);
            bool engine_equal = canonical_form(a) == canonical_form(b);
            CHECK(naive_equal == engine_equal);
        }
    }
}

TEST_CASE("rooted canonical form distinguishes roots") {
    Structure p4 = gen("path:4");
    CHECK(canonical_form(p4, {}, 0) == canonical_form(p4, {}, 3));
    CHECK(canonical_form(p4, {}, 0) != canonical_form(p4, {}, 1));
}

TEST_CASE("rooted canonical form matches the naive rooted partition") {
    std::mt19937_64 rng(167);
    std::vector<std::pair<Structure, int>> rooted;
    for (int i = 0; i < 10; ++i) {
        Structure s = testing::random_bounded_degree_graph(rng, 5, 3, 1);
        std::uniform_int_distribution<int> pick(0, s.domain_size() - 1);
        rooted.emplace_back(std::move(s), pick(rng));
    }
    for (const auto& [a, ra] : rooted) {
        for (const auto& [b, rb] : rooted) {
            if (a.domain_size() != b.domain_size()) continue;
            bool naive_equal =
                naive::canonical_key(a, ra) == naive::canonical_key(b, rb);
            bool engine_equal = canonical_form(a, {}, ra) == canonical_form(b, {}, rb);
            CHECK(naive_equal == engine_equal);
        }
    }
}

TEST_CASE("canonicalization limit") {
    Structure big = gen("cycle:13");
    CHECK_THROWS_AS(canonical_form(big), budget_error);
    CanonOptions relaxed;
    relaxed.limit = 16;
    CHECK_NOTHROW(canonical_form(big, relaxed));
}

TEST_CASE("highly symmetric structures canonicalize quickly") {
    CHECK(canonical_form(gen("complete:12")) == canonical_form(gen("complete:12")));
    Structure k66 = generate([] {
        GeneratorSpec spec = parse_generator_term("edgeless:12");
        return spec;
    }());
    CHECK(canonical_form(k66) == canonical_form(gen("edgeless:12")));
}

TEST_CASE("structure validation errors name the offender") {
    Signature sig = graph_signature();
    CHECK_THROWS_WITH_AS(Structure(sig, 4, {{"E", {{0, 5}}}}),
                         doctest::Contains("entry 5 out of range"), validation_error);
    CHECK_THROWS_WITH_AS(Structure(sig, 4, {{"E", {{0}}}}),
                         doctest::Contains("width 1, expected arity 2"), validation_error);
    CHECK_THROWS_WITH_AS(Structure(sig, 4, {{"F", {{0, 1}}}}),
                         doctest::Contains("unknown relation symbol"), validation_error);
    CHECK_THROWS_WITH_AS(Structure(sig, 4, {{"E", {{0, 1}, {0, 1}}}}),
                         doctest::Contains("duplicate tuple"), validation_error);
}
