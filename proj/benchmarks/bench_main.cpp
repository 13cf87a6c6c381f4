#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "dqas/circuitgen.hpp"
#include "dqas/dag.hpp"
#include "dqas/expressibility.hpp"
#include "dqas/physical.hpp"
#include "dqas/simulator.hpp"
#include "dqas/vcg.hpp"
#include "dqas/vqe.hpp"

using namespace dqas;

namespace {

Circuit sample_circuit(int n_gates, Method method = Method::telegate, std::uint64_t seed = 1) {
    GenerationRequest req;
    req.n_gates = n_gates;
    req.method = method;
    return generate(two_yorktown_device(), req, seed);
}

std::vector<double> angles(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

void BM_Generate(benchmark::State& state) {
    const auto d = two_yorktown_device();
    const auto sets = derive_position_sets(d);
    GenerationRequest req;
    req.n_gates = static_cast<int>(state.range(0));
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(generate(d, sets, req, rng));
}
BENCHMARK(BM_Generate)->Arg(40)->Arg(60);

void BM_CountPaths(benchmark::State& state) {
    const auto c = sample_circuit(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(count_paths(c));
}
BENCHMARK(BM_CountPaths)->Arg(60)->Arg(500);

void BM_Simulate(benchmark::State& state) {
    const auto c = sample_circuit(60);
    const auto program = compile(c);
    const auto p = angles(c.n_params, 4);
    for (auto _ : state) {
        Statevector s(program.n_wires);
        run(program, p, s);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Simulate);

void BM_SimulatePhysical(benchmark::State& state) {
    const auto d = two_yorktown_device();
    const auto c = sample_circuit(20, Method::both);
    const auto p = angles(c.n_params, 5);
    for (auto _ : state) benchmark::DoNotOptimize(apply_physical(c, p, d));
}
BENCHMARK(BM_SimulatePhysical)->Unit(benchmark::kMillisecond);

void BM_Expressibility(benchmark::State& state) {
    const auto c = sample_circuit(60);
    const ExpressibilitySettings s{static_cast<int>(state.range(0)), 75};
    for (auto _ : state) benchmark::DoNotOptimize(estimate_expressibility(c, s, 6));
}
BENCHMARK(BM_Expressibility)->Arg(5000)->Unit(benchmark::kMillisecond);

void BM_EnergyGradient(benchmark::State& state) {
    const auto c = sample_circuit(60);
    const auto program = compile(c);
    const auto h = build_tfim(6);
    const auto p = angles(c.n_params, 7);
    for (auto _ : state) benchmark::DoNotOptimize(energy_and_gradient(program, p, h));
}
BENCHMARK(BM_EnergyGradient);

void BM_GroundEnergy(benchmark::State& state) {
    const auto h = build_heisenberg(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(exact_ground_energy(h));
}
BENCHMARK(BM_GroundEnergy)->Arg(6)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
