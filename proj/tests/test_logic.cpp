#include <doctest.h>

#include <random>

#include "random_inputs.hpp"
#include "structlim/errors.hpp"
#include "structlim/eval.hpp"
#include "structlim/fragment.hpp"
#include "structlim/generate.hpp"
#include "structlim/parser.hpp"

using namespace structlim;

TEST_CASE("parse basic shapes") {
    Formula f = parse_formula("E(x1,x2) & !x1=x2");
    CHECK(f.kind() == NodeKind::And);
    CHECK(f.child(0) == Formula::rel("E", {1, 2}));
    CHECK(f.child(1) == Formula::negation(Formula::eq(1, 2)));

    Formula g = parse_formula("exists x2. E(x1,x2)");
    CHECK(g == Formula::exists(2, Formula::rel("E", {1, 2})));
    CHECK(free_variables(g) == std::set<int>{1});

    Formula h = parse_formula("forall x1. (E(x1,x1) | true)");
    CHECK(free_variables(h).empty());
}

TEST_CASE("parse sugar") {
    CHECK(parse_formula("A(x1) -> B(x1)") ==
          Formula::disjunction({Formula::negation(Formula::rel("A", {1})),
                                Formula::rel("B", {1})}));
    // <-> desugars to (a & b) | (!a & !b)
    Formula iff = parse_formula("A(x1) <-> B(x1)");
    CHECK(iff.kind() == NodeKind::Or);
    // -> is right-associative
    Formula chain = parse_formula("A(x1) -> B(x1) -> C(x1)");
    CHECK(chain ==
          parse_formula("A(x1) -> (B(x1) -> C(x1))"));
}

TEST_CASE("parse errors carry position") {
    CHECK_THROWS_AS(parse_formula("E(x1,"), parse_error);
    CHECK_THROWS_AS(parse_formula("E(x1) @"), parse_error);
    CHECK_THROWS_AS(parse_formula("exists y. E(y)"), parse_error);
    try {
        parse_formula("E(x1,\n  x2");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
    }
}

TEST_CASE("x followed by digits is always a variable") {
    CHECK_THROWS_AS(parse_formula("x1(x2)"), parse_error);
    Formula f = parse_formula("x1y(x2)"); // "x1y" is an identifier
    CHECK(f == Formula::rel("x1y", {2}));
}

TEST_CASE("free variables") {
    CHECK(free_variables(parse_formula("x1=x2")) == std::set<int>{1, 2});
    CHECK(free_variables(parse_formula("exists x1. E(x1,x1)")).empty());
    CHECK(free_variables(parse_formula("E(x1,x3)")) == std::set<int>{1, 3});
}

TEST_CASE("classify") {
    auto has = [](const std::set<FragmentTag>& tags, FragmentTag t) {
        return tags.count(t) > 0;
    };
    auto tags = classify(parse_formula("E(x1,x2)"));
    CHECK(has(tags, {FragmentTag::Kind::QF}));
    CHECK(has(tags, {FragmentTag::Kind::QFMinus}));
    CHECK(has(tags, {FragmentTag::Kind::FOp, 2}));

    tags = classify(parse_formula("x1=x2"));
    CHECK(has(tags, {FragmentTag::Kind::QF}));
    CHECK(!has(tags, {FragmentTag::Kind::QFMinus}));
    CHECK(has(tags, {FragmentTag::Kind::FOp, 2}));

    tags = classify(parse_formula("exists x1. E(x1,x1)"));
    CHECK(tags == std::set<FragmentTag>{{FragmentTag::Kind::FO0}});
}

TEST_CASE("normalize examples") {
    CHECK(normalize(parse_formula("!(A(x1) & B(x1))")) ==
          parse_formula("!A(x1) | !B(x1)"));
    CHECK(normalize(parse_formula("B(x1) & A(x1)")) == parse_formula("A(x1) & B(x1)"));
    CHECK(normalize(parse_formula("exists x5. E(x1,x5)")) ==
          parse_formula("exists x2. E(x1,x2)"));
}

TEST_CASE("normalize properties") {
    std::mt19937_64 rng(23);
    Signature sig({{"E", 2}, {"A", 1}}, 0);
    testing::FormulaGenOptions opt;
    opt.max_depth = 3;
    opt.max_free_var = 3;
    for (int trial = 0; trial < 300; ++trial) {
        Formula f = testing::random_formula(rng, sig, opt);
        Formula n = normalize(f);
        CHECK(normalize(n) == n);
        CHECK(free_variables(n) == free_variables(f));
    }
}

TEST_CASE("normalize preserves satisfying sets") {
    std::mt19937_64 rng(29);
    Signature sig({{"E", 2}, {"A", 1}}, 0);
    testing::FormulaGenOptions opt;
    opt.max_depth = 3;
    opt.max_free_var = 2;
    for (int trial = 0; trial < 150; ++trial) {
        Formula f = testing::random_formula(rng, sig, opt);
        Formula n = normalize(f);
        Structure s = testing::random_structure(rng, sig, 4);
        CHECK(sat_set(s, f, 2).tuples == sat_set(s, n, 2).tuples);
    }
}

TEST_CASE("render round trip") {
    std::mt19937_64 rng(31);
    Signature sig({{"E", 2}, {"R", 3}, {"A", 1}}, 1);
    testing::FormulaGenOptions opt;
    opt.max_depth = 4;
    opt.max_free_var = 3;
    for (int trial = 0; trial < 400; ++trial) {
        Formula f = testing::random_formula(rng, sig, opt);
        CHECK(parse_formula(render(f)) == f);
    }
    // Nested same-connective chains keep their structure.
    Formula nested = Formula::conjunction(
        {Formula::conjunction({Formula::rel("A", {1}), Formula::rel("A", {2})}),
         Formula::rel("A", {3})});
    CHECK(parse_formula(render(nested)) == nested);
}
