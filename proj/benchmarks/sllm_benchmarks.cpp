#include <benchmark/benchmark.h>

#include <random>

#include "sllm/derivation.hpp"
#include "sllm/linear_map.hpp"
#include "sllm/prover.hpp"
#include "sllm/statistics.hpp"
#include "sllm/tensor.hpp"

using namespace sllm;

namespace {

const char* kSequents[] = {
    "n, n\\s -> s",
    "!@n, n\\s, @n\\n, n\\s -> s.s",
    "n, !@(n\\s), n, @(n\\s)\\(n\\s) -> s.s",
    "n, (n\\n)/(s/!@n), n, (n\\s)/n, ((n\\s)\\(n\\s))/n, n/n -> n",
    "!@n, !@(!@(n\\s)/n), !@(@n\\n)/n, n, !@n, @(n\\s)\\(n\\s) -> s.s",
};

std::vector<double> random_vector(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

void BM_Prove(benchmark::State& state) {
    const Sequent s = parse_sequent(kSequents[state.range(0)]);
    CalculusConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(prove(s, cfg));
    state.SetLabel(format_sequent(s));
}
BENCHMARK(BM_Prove)->DenseRange(0, 4);

void BM_EnumerateReadings(benchmark::State& state) {
    const Sequent s = parse_sequent(kSequents[4]);
    CalculusConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(enumerate_proofs(s, cfg, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_EnumerateReadings)->Arg(1)->Arg(10);

void BM_CompileAndApply(benchmark::State& state) {
    const Sequent s = parse_sequent(kSequents[1]);
    CalculusConfig cfg;
    const Derivation d = *prove(s, cfg);
    const std::size_t dim = static_cast<std::size_t>(state.range(0));
    AtomDims dims{{"n", dim}, {"s", dim}};
    std::vector<TensorValue> words;
    unsigned seed = 1;
    for (const auto& f : s.antecedent) {
        SpaceShape shape = shape_of(f, dims, cfg.k0);
        words.emplace_back(shape, random_vector(shape.total_dim(), seed++));
    }
    for (auto _ : state) benchmark::DoNotOptimize(apply_product(compile_derivation(d, dims, cfg), words));
}
BENCHMARK(BM_CompileAndApply)->RangeMultiplier(2)->Range(2, 16);

void BM_FockEmbed(benchmark::State& state) {
    const TensorValue v = TensorValue::vector(random_vector(static_cast<std::size_t>(state.range(0)), 3));
    const int k0 = static_cast<int>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(fock_embed_tilde(v, k0));
}
BENCHMARK(BM_FockEmbed)->ArgsProduct({{10, 50, 100}, {1, 2, 3}});

void BM_FockMap(benchmark::State& state) {
    const std::size_t d = static_cast<std::size_t>(state.range(0));
    const LinearMap f = matrix_map(SpaceShape::base(d), SpaceShape::base(d), random_vector(d * d, 4));
    const TensorValue v = fock_embed_tilde(TensorValue::vector(random_vector(d, 5)), 2);
    const LinearMap lifted = fock_map(f, 2);
    for (auto _ : state) benchmark::DoNotOptimize(apply(lifted, v));
}
BENCHMARK(BM_FockMap)->Arg(10)->Arg(50)->Arg(100);

void BM_Spearman(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    const auto x = random_vector(n, 6), y = random_vector(n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(spearman_rho(x, y));
}
BENCHMARK(BM_Spearman)->Arg(200)->Arg(2000)->Arg(20000);

void BM_TTestReport(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0));
    auto human = random_vector(n, 8), cos = random_vector(n, 9);
    std::vector<std::vector<std::size_t>> groups(n / 8);
    for (std::size_t i = 0; i < n; ++i) groups[i % groups.size()].push_back(i);
    for (auto _ : state) benchmark::DoNotOptimize(t_test_report(groups, human, cos));
}
BENCHMARK(BM_TTestReport)->Arg(200)->Arg(2000);

}  // namespace

BENCHMARK_MAIN();
