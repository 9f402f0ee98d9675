#include <benchmark/benchmark.h>

#include "generators.hpp"
#include "nccw/dsl.hpp"
#include "nccw/elements.hpp"
#include "nccw/ktheory.hpp"

using namespace nccw;

static void smith_normal_form_random(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    gen::Rng rng(1);
    const IntMatrix m = gen::random_matrix(rng, n, n, -5, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(smith_normal_form(m));
}
BENCHMARK(smith_normal_form_random)->Arg(3)->Arg(8)->Arg(16)->Arg(32);

static void six_term_random(benchmark::State& state)
{
    gen::Rng rng(2);
    std::vector<MorphismSequence> sequences;
    for (int i = 0; i < 64; ++i)
        sequences.push_back(gen::random_sequence(rng));
    std::size_t i = 0;
    for (auto _ : state)
        benchmark::DoNotOptimize(six_term_report(sequences[i++ % sequences.size()]).pass);
}
BENCHMARK(six_term_random);

static void parse_model(benchmark::State& state)
{
    gen::Rng rng(3);
    std::string one;
    while (one.size() < 200)
        one = dsl::render(gen::random_model(rng));
    for (auto _ : state)
        benchmark::DoNotOptimize(dsl::parse(one).ok());
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * one.size()));
}
BENCHMARK(parse_model);

static void retraction_grid(benchmark::State& state)
{
    const auto grid = static_cast<std::size_t>(state.range(0));
    gen::Rng rng(4);
    const MorphismSequence s = gen::random_sequence(rng);
    const TelescopeElement x = random_element(s, Flavor::cylindrical, grid, rng);
    const TelescopeElement y = random_element(s, Flavor::cylindrical, grid, rng);
    const std::vector<double> t{0.0, 0.25, 0.5, 0.75, 1.0};
    for (auto _ : state)
        benchmark::DoNotOptimize(retraction_check(x, y, t).pass);
}
BENCHMARK(retraction_grid)->Arg(100)->Arg(1000);
BENCHMARK_MAIN();
