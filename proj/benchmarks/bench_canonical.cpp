#include <benchmark/benchmark.h>

#include <random>

#include "structlim/canonical.hpp"
#include "structlim/generate.hpp"

using namespace structlim;

namespace {

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

void BM_CanonicalCycleRooted(benchmark::State& state) {
    Structure c = gen("cycle:" + std::to_string(state.range(0)));
    CanonOptions opts;
    opts.limit = 16;
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonical_form(c, opts, 0));
    }
}
BENCHMARK(BM_CanonicalCycleRooted)->Arg(6)->Arg(9)->Arg(12);

void BM_CanonicalRandomRegular(benchmark::State& state) {
    Structure s = generate(parse_generator_term(
        "random_regular:" + std::to_string(state.range(0)) + ":3:11"));
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonical_form(s));
    }
}
BENCHMARK(BM_CanonicalRandomRegular)->Arg(8)->Arg(10)->Arg(12);

void BM_CanonicalComplete(benchmark::State& state) {
    Structure s = gen("complete:" + std::to_string(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(canonical_form(s));
    }
}
BENCHMARK(BM_CanonicalComplete)->Arg(8)->Arg(12);

} // namespace
