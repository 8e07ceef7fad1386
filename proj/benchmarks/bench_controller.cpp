#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "ddoco/behavioral.hpp"
#include "ddoco/config.hpp"
#include "ddoco/controller.hpp"
#include "ddoco/harness.hpp"
#include "ddoco/linalg.hpp"
#include "ddoco/plant.hpp"
#include "ddoco/steady_state.hpp"

using namespace ddoco;

namespace {

/// Offline data for the five-zone thermal plant, sized for horizon mu.
Trajectory hvac_data(Index mu) {
    const ExperimentConfig c = hvac_default_config();
    OfflineDataSpec spec;
    spec.n = c.controller.n;
    spec.mu = mu;
    spec.length = minimum_data_length(c.plant.hvac.capacitance.size(), spec.n, mu) * 2;
    spec.seed = c.offline.seed;
    return collect_offline_data(build_plant(c.plant), spec);
}

}  // namespace

static void BuildHankel(benchmark::State& state) {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix signal(5, state.range(0));
    for (Index i = 0; i < signal.size(); ++i) signal.data()[i] = dist(rng);
    for (auto _ : state) benchmark::DoNotOptimize(build_hankel(signal, 20));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BuildHankel)->RangeMultiplier(2)->Range(256, 4096)->Complexity();

static void Pseudoinverse(benchmark::State& state) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const Index rows = state.range(0);
    Matrix a(rows, 2 * rows);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = dist(rng);
    for (auto _ : state) benchmark::DoNotOptimize(linalg::pseudoinverse(a));
}
BENCHMARK(Pseudoinverse)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

static void BuildProjectorHvac(benchmark::State& state) {
    const Trajectory data = hvac_data(10);
    const Index n = hvac_default_config().controller.n;
    for (auto _ : state) benchmark::DoNotOptimize(build_projector(data, n));
}
BENCHMARK(BuildProjectorHvac)->Unit(benchmark::kMillisecond);

static void PrecomputeHvac(benchmark::State& state) {
    const ExperimentConfig c = hvac_default_config();
    const HankelSet hankels = build_hankel_set(hvac_data(state.range(0)), c.controller.n, state.range(0));
    const Matrix q = build_weight_matrix(hankels, c.controller.weight);
    for (auto _ : state) benchmark::DoNotOptimize(precompute(hankels, q));
}
BENCHMARK(PrecomputeHvac)->Arg(10)->Arg(30)->Unit(benchmark::kMillisecond);

/// Online cost only: one compute_input / observe pair per iteration.
static void ControllerStepHvac(benchmark::State& state) {
    const ExperimentConfig c = hvac_default_config();
    const PlantModel plant = build_plant(c.plant);
    const Trajectory data = hvac_data(c.controller.mu);
    auto hankels = std::make_shared<const HankelSet>(build_hankel_set(data, c.controller.n, c.controller.mu));
    DataDrivenController controller(hankels, build_projector(data, c.controller.n), c.controller);
    const auto cost = build_cost(c, plant);

    const Index n = c.controller.n;
    InitialData init;
    init.u.assign(n, Vector::Zero(plant.inputs()));
    init.y_meas.assign(n, Vector::Zero(plant.outputs()));
    controller.start(init);
    const Index stages = cost->horizon().value_or(1);
    const Vector y = Vector::Zero(plant.outputs());
    Index t = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(controller.compute_input());
        controller.observe(y, StageCost(cost, t % stages));
        ++t;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(ControllerStepHvac)->Unit(benchmark::kMicrosecond);

static void HvacDay(benchmark::State& state) {
    const ExperimentConfig c = hvac_default_config();
    for (auto _ : state) benchmark::DoNotOptimize(run_experiment(c).summary);
    state.SetItemsProcessed(state.iterations() * (c.horizon + 1));
}
BENCHMARK(HvacDay)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
