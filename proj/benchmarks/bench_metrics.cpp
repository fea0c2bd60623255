#include <benchmark/benchmark.h>

#include "structlim/chain.hpp"
#include "structlim/generate.hpp"

using namespace structlim;

namespace {

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

void BM_BallDistribution(benchmark::State& state) {
    Structure s = generate(parse_generator_term(
        "random_regular:" + std::to_string(state.range(0)) + ":3:5"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(ball_distribution(s, 2, 0));
    }
}
BENCHMARK(BM_BallDistribution)->Arg(16)->Arg(64)->Arg(256);

void BM_DistBoundsCycles(benchmark::State& state) {
    Structure a = gen("cycle:8");
    Structure b = gen("cycle:12");
    for (auto _ : state) {
        benchmark::DoNotOptimize(dist_bounds(a, b, BallChain{}, 6));
    }
}
BENCHMARK(BM_DistBoundsCycles);

} // namespace
