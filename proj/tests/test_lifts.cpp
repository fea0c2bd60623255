#include <doctest.h>

#include <random>

#include "naive.hpp"
#include "random_inputs.hpp"
#include "structlim/errors.hpp"
#include "structlim/generate.hpp"
#include "structlim/lifts.hpp"
#include "structlim/parallel.hpp"

using namespace structlim;

namespace {

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

constexpr std::int64_t kBudget = 1 << 24;

LiftStatSet exact_set(const Structure& s, int c, int r) {
    return lift_stat_set(s, c, r, SearchMode::Exact, kBudget, 0);
}

} // namespace

TEST_CASE("enumerate_lifts counts and order") {
    Structure k2 = gen("complete:2");
    std::vector<Lift> lifts;
    enumerate_lifts(k2, 1, kBudget, [&](const Lift& l) { lifts.push_back(l); });
    CHECK(lifts.size() == 4);
    // Lexicographic assignment words: vertex 0 is the most significant
    // digit, so the marked sets come out as {}, {1}, {0}, {0,1}.
    CHECK(lifts[0].marks[0].members().empty());
    CHECK(lifts[1].marks[0].members() == std::vector<int>{1});
    CHECK(lifts[2].marks[0].members() == std::vector<int>{0});
    CHECK(lifts[3].marks[0].members() == std::vector<int>{0, 1});

    int count = 0;
    enumerate_lifts(k2, 2, kBudget, [&](const Lift&) { ++count; });
    CHECK(count == 16);
    count = 0;
    enumerate_lifts(k2, 0, kBudget, [&](const Lift& l) {
        ++count;
        CHECK(l.to_structure() == k2);
    });
    CHECK(count == 1);
}

TEST_CASE("enumerate_lifts budget error names the requirement") {
    Structure c16 = gen("cycle:16");
    CHECK_THROWS_WITH_AS(enumerate_lifts(c16, 2, kBudget, [](const Lift&) {}),
                         doctest::Contains("4294967296"), budget_error);
}

TEST_CASE("lift stat set of the 2-vertex edgeless graph") {
    LiftStatSet s = exact_set(gen("edgeless:2"), 1, 0);
    // Four lifts, but marking exactly one vertex gives the same
    // distribution either way: three distinct statistics.
    CHECK(s.size() == 3);

    LiftStatSet trivial = exact_set(gen("path:3"), 0, 1);
    CHECK(trivial.size() == 1);
}

TEST_CASE("stat sets are deterministic across thread counts") {
    Structure c6 = gen("cycle:6");
    set_thread_limit(1);
    LiftStatSet one = exact_set(c6, 1, 1);
    set_thread_limit(8);
    LiftStatSet eight = exact_set(c6, 1, 1);
    set_thread_limit(0);
    CHECK(one.members == eight.members);
    REQUIRE(one.types.size() == eight.types.size());
    for (std::size_t i = 0; i < one.types.size(); ++i) {
        CHECK(one.types[i].key == eight.types[i].key);
    }
}

TEST_CASE("hausdorff distance basics") {
    LiftStatSet a = exact_set(gen("cycle:6"), 1, 1);
    CHECK(hausdorff_distance(a, a) == 0);

    // Singleton sets degenerate to the tv distance of the members.
    LiftStatSet sa = exact_set(gen("cycle:6"), 0, 1);
    LiftStatSet sb = exact_set(gen("path:6"), 0, 1);
    BallDistribution da = sa.materialize(0);
    BallDistribution db = sb.materialize(0);
    CHECK(hausdorff_distance(sa, sb) == tv_distance(da, db));

    LiftStatSet mismatched = exact_set(gen("cycle:6"), 1, 0);
    CHECK_THROWS_AS(hausdorff_distance(a, mismatched), validation_error);
}

TEST_CASE("hausdorff one-sided containment") {
    // {d1, d2} vs {d1} is the distance from d2 to d1.
    LiftStatSet both = exact_set(gen("edgeless:1"), 1, 0); // two constant lifts
    CHECK(both.size() == 2);
    LiftStatSet one = both;
    one.members.pop_back();
    Rational direct = tv_distance(both.materialize(0), both.materialize(1));
    CHECK(hausdorff_distance(both, one) == direct);
}

TEST_CASE("lift_hausdorff examples") {
    Structure c3 = gen("cycle:3"), c4 = gen("cycle:4");
    LiftHausdorffResult same =
        lift_hausdorff(c4, c4, 1, 1, SearchMode::Exact, kBudget, 0);
    CHECK(same.exact);
    CHECK(same.value == 0);
    LiftHausdorffResult diff =
        lift_hausdorff(c3, c4, 1, 1, SearchMode::Exact, kBudget, 0);
    CHECK(diff.value == 1);
}

TEST_CASE("lift_hausdorff matches the naive enumerator") {
    std::vector<std::pair<std::string, std::string>> pairs = {
        {"cycle:4", "cycle:6"}, {"path:4", "cycle:4"}, {"cycle:5", "path:5"},
        {"star:3", "path:4"},
    };
    for (const auto& [ta, tb] : pairs) {
        Structure a = gen(ta), b = gen(tb);
        for (int r : {0, 1}) {
            Rational engine =
                lift_hausdorff(a, b, 1, r, SearchMode::Exact, kBudget, 0).value;
            Rational oracle = naive::lift_hausdorff(a, b, 1, r);
            CHECK(engine == oracle);
        }
    }
}

TEST_CASE("shadow lower bound") {
    std::vector<Structure> corpus = {gen("cycle:3"), gen("cycle:4"), gen("cycle:8"),
                                     gen("path:8"),
                                     disjoint_union(gen("complete:3"), gen("complete:3"))};
    for (const auto& a : corpus) {
        for (const auto& b : corpus) {
            Rational lh = lift_hausdorff(a, b, 1, 1, SearchMode::Exact, kBudget, 0).value;
            Rational tv =
                tv_distance(ball_distribution(a, 1, 0), ball_distribution(b, 1, 0));
            CHECK(lh >= tv);
        }
    }
}

TEST_CASE("shadow consistency of stat set members") {
    Structure c5 = gen("cycle:5");
    LiftStatSet s = exact_set(c5, 1, 1);
    BallDistribution base = ball_distribution(c5, 1, 0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        BallDistribution member = s.materialize(i);
        BallDistribution projected = shadow_projection(member, 0);
        CHECK(tv_distance(projected, base) == 0);
    }
}

TEST_CASE("level monotonicity on small instances") {
    std::vector<std::pair<std::string, std::string>> pairs = {
        {"cycle:4", "path:4"}, {"cycle:5", "cycle:4"}, {"path:5", "star:4"}};
    for (const auto& [ta, tb] : pairs) {
        Structure a = gen(ta), b = gen(tb);
        auto value = [&](int r, int c) {
            return lift_hausdorff(a, b, c, r, SearchMode::Exact, kBudget, 0).value;
        };
        CHECK(value(0, 1) <= value(1, 1));
        CHECK(value(1, 0) <= value(1, 1));
        CHECK(value(1, 1) <= value(1, 2));
        CHECK(value(1, 1) <= value(2, 1));
    }
}

TEST_CASE("hausdorff pseudometric axioms on stat sets") {
    std::vector<LiftStatSet> sets;
    for (const auto& term :
         {"cycle:4", "cycle:5", "cycle:6", "path:4", "path:6", "star:3", "complete:4"}) {
        sets.push_back(exact_set(gen(term), 1, 1));
    }
    for (std::size_t i = 0; i < sets.size(); ++i) {
        CHECK(hausdorff_distance(sets[i], sets[i]) == 0);
        for (std::size_t j = 0; j < sets.size(); ++j) {
            Rational dij = hausdorff_distance(sets[i], sets[j]);
            CHECK(dij == hausdorff_distance(sets[j], sets[i]));
            for (std::size_t k = 0; k < sets.size(); ++k) {
                CHECK(hausdorff_distance(sets[i], sets[k]) <=
                      dij + hausdorff_distance(sets[j], sets[k]));
            }
        }
    }
}

TEST_CASE("sampled mode is deterministic and includes constant lifts") {
    Structure c8 = gen("cycle:8");
    LiftStatSet s1 = lift_stat_set(c8, 1, 1, SearchMode::Heuristic, 64, 12345);
    LiftStatSet s2 = lift_stat_set(c8, 1, 1, SearchMode::Heuristic, 64, 12345);
    CHECK(s1.members == s2.members);
    LiftStatSet s3 = lift_stat_set(c8, 1, 1, SearchMode::Heuristic, 64, 999);
    CHECK(s3.size() >= 2); // at least the two constant lifts
    LiftHausdorffResult h =
        lift_hausdorff(c8, c8, 1, 1, SearchMode::Heuristic, 64, 7);
    CHECK(!h.exact);
}

TEST_CASE("epsilon nets") {
    Structure e2 = gen("edgeless:2");
    EpsilonNet wide = epsilon_net(e2, 1, 0, Rational(1), SearchMode::Exact, kBudget, 0);
    CHECK(wide.net.size() == 1);

    EpsilonNet tight = epsilon_net(e2, 1, 0, Rational(0), SearchMode::Exact, kBudget, 0);
    CHECK(tight.net.size() == exact_set(e2, 1, 0).size());

    EpsilonNet quarter =
        epsilon_net(e2, 1, 0, Rational(1, 4), SearchMode::Exact, kBudget, 0);
    CHECK(quarter.net.size() == 3);
    CHECK(quarter.covering_radius <= Rational(1, 4));

    // Every member of the full set is within eps of the net.
    Structure c6 = gen("cycle:6");
    EpsilonNet net = epsilon_net(c6, 1, 1, Rational(1, 3), SearchMode::Exact, kBudget, 0);
    LiftStatSet full = exact_set(c6, 1, 1);
    CHECK(net.covering_radius <= Rational(1, 3));
    for (std::size_t i = 0; i < full.size(); ++i) {
        Rational best = 2;
        for (std::size_t j = 0; j < net.net.size(); ++j) {
            Rational d = tv_distance(full.materialize(i), net.net.materialize(j));
            if (d < best) best = d;
        }
        CHECK(best <= Rational(1, 3));
    }
}
