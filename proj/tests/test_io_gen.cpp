#include <doctest.h>

#include <random>

#include "random_inputs.hpp"
#include "structlim/errors.hpp"
#include "structlim/generate.hpp"
#include "structlim/io.hpp"
#include "structlim/lifts.hpp"

using namespace structlim;

namespace {

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

} // namespace

TEST_CASE("generators") {
    Structure c4 = gen("cycle:4");
    CHECK(c4.domain_size() == 4);
    CHECK(c4.tuples(0).size() == 8);

    CHECK(gen("complete:3").tuples(0).size() == 6);
    CHECK(gen("path:4").tuples(0).size() == 6);
    CHECK(gen("star:4").domain_size() == 5);
    CHECK(gen("grid:2:3").domain_size() == 6);
    CHECK(max_degree(gen("grid:3:3")) == 4);

    Structure rr1 = gen("random_regular:10:3:7");
    Structure rr2 = gen("random_regular:10:3:7");
    CHECK(rr1 == rr2);
    CHECK(max_degree(rr1) == 3);
    for (const auto& row : rr1.gaifman().adj) CHECK(row.size() == 3);

    CHECK_THROWS_WITH_AS(gen("random_regular:5:3:1"), doctest::Contains("even"),
                         validation_error);
    CHECK_THROWS_AS(gen("cycle:2"), validation_error);
    CHECK_THROWS_AS(gen("frobnicate:4"), validation_error);
}

TEST_CASE("structure json round trip") {
    const std::string text = R"({"signature": {"symbols": [["E",2]], "marks": 2},
        "domain": 4, "relations": {"E": [[0,1],[1,0]], "M1": [[0]], "M2": []}})";
    Structure s = structure_from_json(text);
    CHECK(s.domain_size() == 4);
    CHECK(s.signature().marks() == 2);
    CHECK(s.tuples(0).size() == 2);
    CHECK(s.unary_as_set(s.signature().index_of("M1")).members() == std::vector<int>{0});

    Structure again = structure_from_json(structure_to_json(s));
    CHECK(again == s);

    std::mt19937_64 rng(157);
    for (int trial = 0; trial < 40; ++trial) {
        Structure r = testing::random_bounded_degree_graph(rng, 10, 3, 2);
        CHECK(structure_from_json(structure_to_json(r)) == r);
    }
}

TEST_CASE("structure json validation names the offender") {
    CHECK_THROWS_WITH_AS(
        structure_from_json(R"({"signature": {"symbols": [["E",2]]}, "domain": 2,
                               "relations": {"F": [[0,1]]}})"),
        doctest::Contains("F"), validation_error);
    CHECK_THROWS_WITH_AS(
        structure_from_json(R"({"signature": {"symbols": [["E",2]]}, "domain": 2,
                               "relations": {"E": [[0,7]]}})"),
        doctest::Contains("7"), validation_error);
    CHECK_THROWS_AS(structure_from_json("not json"), validation_error);
}

TEST_CASE("interpretation json round trip") {
    const std::string text = R"({"source": {"symbols": [["E",2]], "marks": 0},
        "target": {"symbols": [["E",2]], "marks": 0}, "p": 1,
        "nu": "x1=x1", "eta": "x1=x2",
        "rho": {"E": "!E(x1,x2) & !x1=x2"}, "basic": true})";
    Interpretation i = interpretation_from_json(text);
    CHECK(i.basic);
    CHECK(i.p == 1);
    Interpretation again = interpretation_from_json(interpretation_to_json(i));
    CHECK(again.rho.at("E") == i.rho.at("E"));
}

TEST_CASE("distribution json round trip") {
    BallDistribution d = ball_distribution(gen("path:4"), 1, 0);
    std::string text = distribution_to_json(d);
    BallDistribution back = distribution_from_json(text);
    CHECK(back.entries.size() == d.entries.size());
    CHECK(tv_distance(d, back) == 0);
}

TEST_CASE("serialization is byte-stable") {
    Structure s = gen("cycle:6");
    CHECK(structure_to_json(s) == structure_to_json(gen("cycle:6")));
    BallDistribution d = ball_distribution(s, 1, 0);
    CHECK(distribution_to_json(d) == distribution_to_json(ball_distribution(s, 1, 0)));
}
