#include <benchmark/benchmark.h>

#include "structlim/ball_formula.hpp"
#include "structlim/eval.hpp"
#include "structlim/generate.hpp"
#include "structlim/parser.hpp"

using namespace structlim;

namespace {

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

void BM_PairingBitset(benchmark::State& state) {
    Structure s = gen("cycle:" + std::to_string(state.range(0)));
    Formula f = parse_formula("exists x3. (E(x1,x3) & E(x3,x2))");
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairing(s, f, 2));
    }
}
BENCHMARK(BM_PairingBitset)->Arg(8)->Arg(16)->Arg(32);

void BM_PairingBallFormula(benchmark::State& state) {
    // Radius-2 ball formulas backtrack like a subgraph isomorphism search.
    Structure s = gen("cycle:" + std::to_string(state.range(0)));
    BallDistribution d = ball_distribution(s, 2, 0);
    Formula zeta = ball_formula(d.entries.front().first);
    for (auto _ : state) {
        benchmark::DoNotOptimize(pairing(s, zeta, 1));
    }
}
BENCHMARK(BM_PairingBallFormula)->Arg(8)->Arg(16);

} // namespace
