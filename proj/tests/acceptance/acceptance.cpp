// Acceptance suite: the toolkit's exit criteria, one test case per
// criterion, each printing a single PASS/FAIL line. Everything here runs in
// exact arithmetic; no tolerances appear anywhere.

#include <doctest.h>

#include <bit>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "naive.hpp"
#include "random_inputs.hpp"
#include "structlim/analysis.hpp"
#include "structlim/ball_formula.hpp"
#include "structlim/chain.hpp"
#include "structlim/eval.hpp"
#include "structlim/fragment.hpp"
#include "structlim/generate.hpp"
#include "structlim/interpretation.hpp"
#include "structlim/io.hpp"
#include "structlim/lifts.hpp"
#include "structlim/parser.hpp"

using namespace structlim;

namespace {

struct Criterion {
    int number;
    std::string summary;
    bool ok = true;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ~Criterion() {
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
        std::printf("criterion %d [%s]: %s (%lld ms)\n", number, summary.c_str(),
                    ok ? "PASS" : "FAIL", static_cast<long long>(ms));
        std::fflush(stdout);
    }
};

#define ACC(cond)                 \
    do {                          \
        bool acc_ok_ = (cond);    \
        CHECK(acc_ok_);           \
        crit.ok = crit.ok && acc_ok_; \
    } while (0)

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

Structure copies(const Structure& c, int k) {
    Structure out = c;
    for (int i = 1; i < k; ++i) out = disjoint_union(out, c);
    return out;
}

Interpretation random_basic_interp(std::mt19937_64& rng, const Signature& source,
                                   const Signature& target, int p) {
    Interpretation i;
    i.source = source;
    i.target = target;
    i.p = p;
    i.basic = true;
    i.nu = basic_nu(p);
    i.eta = basic_eta(p);
    testing::FormulaGenOptions opt;
    opt.max_depth = 2;
    for (int si = 0; si < target.symbol_count(); ++si) {
        opt.max_free_var = target.arity(si) * p;
        i.rho[target.name(si)] = testing::random_formula(rng, source, opt);
    }
    i.validate();
    return i;
}

} // namespace

TEST_CASE("criterion 1: interpretation soundness") {
    Criterion crit{1, "1000 random (interpretation, formula, structure) triples"};
    std::mt19937_64 rng(20260808);
    Signature tau({{"E", 2}, {"A", 1}}, 0);
    Signature sigma({{"F", 2}, {"B", 1}}, 0);
    testing::FormulaGenOptions opt;
    opt.max_depth = 3;
    opt.max_free_var = 2;
    testing::FormulaGenOptions nu_opt;
    nu_opt.max_depth = 2;
    nu_opt.max_free_var = 1;
    int checked = 0;
    for (int trial = 0; checked < 1000; ++trial) {
        // Half basic interpretations at widths 1 and 2, half
        // domain-restricting ones (random nu with eta = equality), which
        // exercise the quantifier conditioning.
        const bool restricted = trial % 2 == 1;
        const int p = restricted ? 1 : 1 + (trial % 4 == 0 ? 1 : 0);
        Interpretation interp = random_basic_interp(rng, tau, sigma, p);
        if (restricted) {
            interp.basic = false;
            interp.nu = testing::random_formula(rng, tau, nu_opt);
            interp.validate();
        }
        Structure a = testing::random_structure(rng, tau, 4);
        // The domain elements of apply(interp, a) are the nu-satisfying
        // p-tuples in lexicographic order (classes are singletons since
        // eta is equality).
        std::vector<Tuple> domain_tuples = sat_set(a, interp.nu, p).tuples;
        if (domain_tuples.empty()) continue; // nothing to quantify over
        Formula phi = testing::random_formula(rng, sigma, opt);
        Structure b = apply(interp, a);
        Formula phi_hat = transform_formula(interp, phi);
        const int arity = std::max(1, max_free_variable(phi));
        bool all_match = true;
        std::vector<int> idx(static_cast<std::size_t>(arity), 0);
        while (all_match) {
            Assignment on_b, on_a;
            for (int k = 0; k < arity; ++k) {
                int cls = idx[static_cast<std::size_t>(k)];
                on_b[k + 1] = cls;
                const Tuple& rep = domain_tuples[static_cast<std::size_t>(cls)];
                for (int t = 0; t < p; ++t) {
                    on_a[k * p + t + 1] = rep[static_cast<std::size_t>(t)];
                }
            }
            all_match = satisfies(b, phi, on_b) == satisfies(a, phi_hat, on_a);
            int pos = arity - 1;
            while (pos >= 0) {
                if (++idx[static_cast<std::size_t>(pos)] < b.domain_size()) break;
                idx[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
        }
        ACC(all_match);
        ++checked;
    }
}

TEST_CASE("criterion 2: pairing algebra") {
    Criterion crit{2, "padding, complement, inclusion-exclusion, sentence dichotomy"};
    std::mt19937_64 rng(20260809);
    Signature sig({{"E", 2}, {"A", 1}}, 0);
    testing::FormulaGenOptions opt;
    opt.max_depth = 3;
    opt.max_free_var = 2;
    for (int trial = 0; trial < 1000; ++trial) {
        Formula f = testing::random_formula(rng, sig, opt);
        Formula g = testing::random_formula(rng, sig, opt);
        Structure s = testing::random_structure(rng, sig, 4);
        int p = std::max(max_free_variable(f), max_free_variable(g));
        ACC(pairing(s, f, p) == pairing(s, f, p + 1));
        ACC(pairing(s, f, p) + pairing(s, Formula::negation(f), p) == 1);
        ACC(pairing(s, Formula::conjunction({f, g}), p) +
                pairing(s, Formula::disjunction({f, g}), p) ==
            pairing(s, f, p) + pairing(s, g, p));
        if (free_variables(f).empty()) {
            Rational v = pairing(s, f);
            ACC(v == 0 || v == 1);
        }
    }
}

TEST_CASE("criterion 3: local-formula bridge equals total variation") {
    Criterion crit{3, "200 bounded-degree graphs, ball-formula level max = tv"};
    std::mt19937_64 rng(20260810);
    std::vector<Structure> graphs;
    for (int i = 0; i < 200; ++i) {
        graphs.push_back(testing::random_bounded_degree_graph(rng, 12, 3, 1));
    }
    for (int i = 0; i < 200; ++i) {
        const Structure& a = graphs[static_cast<std::size_t>(i)];
        const Structure& b = graphs[static_cast<std::size_t>((i + 101) % 200)];
        int r = 1 + (i % 2);
        int c = i % 2;
        auto level = ball_formula_level(a, b, r, c);
        Rational stat = formula_stat_max(a, b, level);
        Rational tv =
            tv_distance(ball_distribution(a, r, c), ball_distribution(b, r, c));
        ACC(stat == tv);
    }
}

TEST_CASE("criterion 4: pseudometric axioms") {
    Criterion crit{4, "dist_bounds and hausdorff_distance: symmetry, identity, triangle"};
    std::vector<Structure> corpus = {
        gen("cycle:3"),  gen("cycle:4"), gen("cycle:5"),    gen("cycle:8"),
        gen("path:4"),   gen("path:6"), gen("star:3"),     gen("complete:4"),
        gen("edgeless:5"), disjoint_union(gen("complete:3"), gen("complete:3"))};
    const std::size_t n = corpus.size();

    std::vector<std::vector<Rational>> dist(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            DistanceBounds d = dist_bounds(corpus[i], corpus[j], BallChain{}, 6);
            ACC(d.exact);
            dist[i][j] = d.value();
        }
    }
    int dist_triples = 0;
    for (std::size_t i = 0; i < n; ++i) {
        ACC(dist[i][i] == 0);
        for (std::size_t j = 0; j < n; ++j) {
            ACC(dist[i][j] == dist[j][i]);
            for (std::size_t k = 0; k < n && dist_triples < 400; ++k) {
                ACC(dist[i][k] <= dist[i][j] + dist[j][k]);
                ++dist_triples;
            }
        }
    }
    ACC(dist_triples >= 50);

    std::vector<LiftStatSet> sets;
    for (const auto& s : corpus) {
        if (s.domain_size() <= 8) {
            sets.push_back(lift_stat_set(s, 1, 1, SearchMode::Exact, 1 << 24, 0));
        }
    }
    const std::size_t m = sets.size();
    std::vector<std::vector<Rational>> hd(m, std::vector<Rational>(m));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            hd[i][j] = hausdorff_distance(sets[i], sets[j]);
        }
    }
    int hd_triples = 0;
    for (std::size_t i = 0; i < m; ++i) {
        ACC(hd[i][i] == 0);
        for (std::size_t j = 0; j < m; ++j) {
            ACC(hd[i][j] == hd[j][i]);
            for (std::size_t k = 0; k < m && hd_triples < 400; ++k) {
                ACC(hd[i][k] <= hd[i][j] + hd[j][k]);
                ++hd_triples;
            }
        }
    }
    ACC(hd_triples >= 50);
}

TEST_CASE("criterion 5: component-proportionality certificate, both directions") {
    Criterion crit{5, "100 accepted multiple-of-C pairs, 100 rejected pairs"};
    std::mt19937_64 rng(20260811);

    // Accepted direction: multiples of a common structure agree on ball
    // formulas.
    for (int trial = 0; trial < 100; ++trial) {
        Structure c = testing::random_bounded_degree_graph(rng, 5, 3, 0);
        int ka = 1 + (trial % 3), kb = 1 + ((trial + 1) % 3);
        Structure a = copies(c, ka);
        Structure b = copies(c, kb);
        Fo1LocalResult res = fo1local_equiv(a, b);
        ACC(res.equivalent);
        if (!res.equivalent) continue;
        // Pairing agreement on a sample of ball formulas (across radii).
        int used = 0;
        for (int radius : {0, 1, 2}) {
            BallDistribution d = ball_distribution(a, radius, 0);
            for (const auto& [type, weight] : d.entries) {
                if (used >= 20) break;
                Formula zeta = ball_formula(type);
                ACC(pairing(a, zeta, 1) == pairing(b, zeta, 1));
                ++used;
            }
        }
        ACC(used > 0);
    }

    // Rejected direction: non-proportional component counts, with a
    // distinguishing radius within max component diameter + 1.
    int rejected = 0;
    for (int trial = 0; rejected < 100 && trial < 400; ++trial) {
        Structure c1 = testing::random_bounded_degree_graph(rng, 5, 3, 0);
        Structure c2 = testing::random_bounded_degree_graph(rng, 5, 3, 0);
        Structure a = disjoint_union(c1, c2);
        Structure b = disjoint_union(c1, copies(c2, 2));
        Fo1LocalResult res = fo1local_equiv(a, b);
        if (res.equivalent) continue; // c1, c2 happened to share types
        ++rejected;
        int limit = std::max(a.domain_size(), b.domain_size()) + 1;
        bool found = false;
        int found_r = -1;
        for (int r = 0; r <= limit && !found; ++r) {
            if (tv_distance(ball_distribution(a, r, 0), ball_distribution(b, r, 0)) > 0) {
                found = true;
                found_r = r;
            }
        }
        ACC(found);
        ACC(found_r <= limit);
    }
    ACC(rejected == 100);
}

TEST_CASE("criterion 6: shadow lower bound") {
    Criterion crit{6, "lift-Hausdorff at (r=1,c=1) dominates shadow tv on the corpus"};
    std::vector<Structure> corpus = {gen("cycle:3"), gen("cycle:4"),
                                     gen("cycle:8"), gen("cycle:12"),
                                     gen("path:8"),
                                     disjoint_union(gen("complete:3"), gen("complete:3"))};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t j = 0; j < corpus.size(); ++j) {
            Rational lh = lift_hausdorff(corpus[i], corpus[j], 1, 1, SearchMode::Exact,
                                         1 << 24, 0)
                              .value;
            Rational tv = tv_distance(ball_distribution(corpus[i], 1, 0),
                                      ball_distribution(corpus[j], 1, 0));
            ACC(lh >= tv);
        }
    }
}

TEST_CASE("criterion 7: cycle local-global experiment") {
    Criterion crit{7, "lift-Hausdorff of (C_n, C_{n+4}), engine vs naive, Cauchy trend"};
    std::vector<Rational> values;
    for (int n : {8, 10, 12, 14, 16}) {
        Structure a = gen("cycle:" + std::to_string(n));
        Structure b = gen("cycle:" + std::to_string(n + 4));
        auto t0 = std::chrono::steady_clock::now();
        Rational engine =
            lift_hausdorff(a, b, 1, 1, SearchMode::Exact, 1 << 24, 0).value;
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        if (n == 16) ACC(ms <= 60000);
        values.push_back(engine);
        if (n <= 12) {
            Rational oracle = naive::lift_hausdorff(a, b, 1, 1);
            ACC(engine == oracle);
        }
    }
    for (std::size_t i = 1; i < values.size(); ++i) {
        ACC(values[i] <= values[i - 1]);
    }
}

TEST_CASE("criterion 8: expansion fixtures") {
    Criterion crit{8, "expander checks, h_out(K_4) = 3, hall(C_5) = 2/5"};
    ExpanderParams params{1, Rational(1, 4), Rational(3, 10)};
    ACC(expanding_check(gen("complete:5"), params).expanding);

    Structure p10 = gen("path:10");
    ExpandResult res = expanding_check(p10, params);
    ACC(!res.expanding);
    ACC(res.witness.has_value());
    if (res.witness) {
        Rational nu = measure(p10, *res.witness);
        ACC(nu > Rational(1, 4));
        ACC(nu < Rational(3, 4));
        ACC(measure(p10, ball(p10, *res.witness, 1)) <= Rational(13, 10) * nu);
    }

    HoutResult k4 = h_out(gen("complete:4"), SearchMode::Exact, 0, 0);
    ACC(k4.exact);
    ACC(k4.value == 3);
    // Independent brute-force confirmation.
    {
        Structure s = gen("complete:4");
        Rational best = -1;
        for (std::uint32_t mask = 1; mask < 16; ++mask) {
            int k = std::popcount(mask);
            if (!(2 * k < 4)) continue;
            std::set<int> members;
            for (int v = 0; v < 4; ++v) {
                if (mask & (1u << v)) members.insert(v);
            }
            auto ballset = naive::ball_set(s, members, 1);
            int out_count = 0;
            for (int v : ballset) {
                if (!members.count(v)) ++out_count;
            }
            Rational ratio(out_count, k);
            ratio.canonicalize();
            if (best < 0 || ratio < best) best = ratio;
        }
        ACC(best == k4.value);
    }

    ACC(hall_ratio(gen("cycle:5"), 1 << 20) == Rational(2, 5));
}

#ifndef STRUCTLIM_CLI_PATH
#define STRUCTLIM_CLI_PATH "structlim"
#endif

namespace {

int run_to_file(const std::string& command, const std::string& out_path) {
    std::string full = command + " > " + out_path + " 2>/dev/null";
    return std::system(full.c_str());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("criterion 9: determinism across thread counts") {
    Criterion crit{9, "exact-mode CLI output is byte-identical for 1 vs 8 threads"};
    namespace fs = std::filesystem;
    const std::string cli = STRUCTLIM_CLI_PATH;
    fs::path dir = fs::temp_directory_path() / "structlim_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir / "seq");
    auto p = [&](const std::string& name) { return (dir / name).string(); };

    // Corpus.
    ACC(run_to_file(cli + " gen cycle 8 -o " + p("c8.json"), p("gen8.out")) == 0);
    ACC(run_to_file(cli + " gen cycle 12 -o " + p("c12.json"), p("gen12.out")) == 0);
    ACC(run_to_file(cli + " gen path 10 -o " + p("p10.json"), p("genp.out")) == 0);
    ACC(run_to_file(cli + " gen complete 5 -o " + p("k5.json"), p("genk.out")) == 0);
    ACC(run_to_file(cli + " gen path 8 --marks 1 --mark 1:0,1 -o " + p("pm8.json"),
                    p("genm.out")) == 0);
    ACC(run_to_file(cli + " gen path 12 --marks 1 --mark 1:0,1 -o " + p("pm12.json"),
                    p("genm2.out")) == 0);
    ACC(run_to_file(cli + " gen cycle 8 -o " + (dir / "seq" / "a.json").string(),
                    p("s1.out")) == 0);
    ACC(run_to_file(cli + " gen cycle 12 -o " + (dir / "seq" / "b.json").string(),
                    p("s2.out")) == 0);
    {
        std::ofstream interp(p("comp.json"));
        interp << R"({"source": {"symbols": [["E",2]], "marks": 0},
                      "target": {"symbols": [["E",2]], "marks": 0},
                      "p": 1, "basic": true,
                      "rho": {"E": "!E(x1,x2) & !x1=x2"}})";
    }

    const std::vector<std::string> commands = {
        " validate -s " + p("c8.json"),
        " eval -s " + p("c8.json") + " -f \"exists x2. E(x1,x2)\"",
        " dist -s " + p("c8.json") + " -s " + p("c12.json") + " --nmax 6",
        " tv -s " + p("c8.json") + " -s " + p("c12.json") + " -r 3",
        " lift-hausdorff -s " + p("c8.json") + " -s " + p("c12.json") + " -r 1 -c 1",
        " eps-net -s " + p("c8.json") + " -r 1 -c 1 --eps 1/8",
        " interpret -i " + p("comp.json") + " --transform -f \"E(x1,x2)\"",
        " interpret -i " + p("comp.json") + " --apply -s " + p("c8.json"),
        " equiv -s " + p("c8.json") + " -s " + p("c12.json"),
        " expander -s " + p("p10.json") + " --d 1 --eps 1/4 --delta 3/10",
        " hout -s " + p("p10.json"),
        " hall -s " + p("k5.json"),
        " cluster-report -s " + p("pm8.json") + " -s " + p("pm12.json") +
            " --mark 1 --dmax 2 -f \"E(x1,x2)\"",
        " converge-report --dir " + (dir / "seq").string() + " -r 1 -c 1 --nmax 4",
    };
    for (std::size_t i = 0; i < commands.size(); ++i) {
        std::string out1 = p("t1_" + std::to_string(i) + ".out");
        std::string out8 = p("t8_" + std::to_string(i) + ".out");
        int rc1 = run_to_file(cli + commands[i] + " --threads 1", out1);
        int rc8 = run_to_file(cli + commands[i] + " --threads 8", out8);
        ACC(rc1 == 0);
        ACC(rc1 == rc8);
        std::string b1 = slurp(out1), b8 = slurp(out8);
        ACC(!b1.empty());
        ACC(b1 == b8);
        // Re-running must also be byte-identical.
        std::string out1b = p("t1b_" + std::to_string(i) + ".out");
        run_to_file(cli + commands[i] + " --threads 1", out1b);
        ACC(slurp(out1b) == b1);
    }
    fs::remove_all(dir);
}
