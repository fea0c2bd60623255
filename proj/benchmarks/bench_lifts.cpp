#include <benchmark/benchmark.h>

#include "structlim/generate.hpp"
#include "structlim/lifts.hpp"

using namespace structlim;

namespace {

Structure gen(const std::string& term) { return generate(parse_generator_term(term)); }

void BM_LiftStatSet(benchmark::State& state) {
    Structure s = gen("cycle:" + std::to_string(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            lift_stat_set(s, 1, 1, SearchMode::Exact, std::int64_t{1} << 24, 0));
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << state.range(0)));
}
BENCHMARK(BM_LiftStatSet)->Arg(10)->Arg(14)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_LiftHausdorffCycles(benchmark::State& state) {
    Structure a = gen("cycle:" + std::to_string(state.range(0)));
    Structure b = gen("cycle:" + std::to_string(state.range(0) + 4));
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            lift_hausdorff(a, b, 1, 1, SearchMode::Exact, std::int64_t{1} << 24, 0));
    }
}
BENCHMARK(BM_LiftHausdorffCycles)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

} // namespace
