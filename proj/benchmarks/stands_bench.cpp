#include <benchmark/benchmark.h>

#include "stands/detector.hpp"
#include "stands/harness.hpp"
#include "stands/stats.hpp"

namespace {

stands::ScenarioSpec table1_spec(int runs) {
    stands::ScenarioSpec spec;
    spec.layout.offsets = {1.0, 0.0, 2.0};
    spec.layout.reference = 1;
    spec.object.true_distance = 10.0;
    spec.noise = stands::NoiseModel::uniform(0.0, 0.1);
    spec.detector.sigma = 0.0289;
    spec.detector.alpha = 0.95;
    spec.detector.dof = 2;
    spec.detector.threshold_mode = stands::ThresholdMode::Calibrated;
    spec.detector.k = 2.0;
    spec.runs = runs;
    spec.seed = 42;
    spec.calibration_runs = 200;
    return spec;
}

void BM_Residuals(benchmark::State& state) {
    const stands::ScenarioSpec spec = table1_spec(1);
    const stands::NoiseStreams streams(spec.seed, stands::StreamPhase::Evaluation);
    const stands::MeasurementFrame frame =
        stands::measure(spec.layout, spec.object, spec.noise, streams, 0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stands::residuals(frame, spec.layout));
    }
}
BENCHMARK(BM_Residuals);

void BM_EvaluateFrame(benchmark::State& state) {
    const stands::ScenarioSpec spec = table1_spec(1);
    const stands::NoiseStreams streams(spec.seed, stands::StreamPhase::Evaluation);
    const stands::MeasurementFrame prev =
        stands::measure(spec.layout, spec.object, spec.noise, streams, 0);
    stands::MeasurementFrame curr =
        stands::measure(spec.layout, spec.object, spec.noise, streams, 1);
    stands::DetectorConfig config = spec.detector;
    config.temporal_threshold = 0.15;
    for (auto _ : state) {
        benchmark::DoNotOptimize(stands::evaluate(curr, &prev, spec.layout, config, 0.27));
    }
}
BENCHMARK(BM_EvaluateFrame);

void BM_ChiSquaredQuantile(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(stands::chi_squared_quantile(2, 0.95));
    }
}
BENCHMARK(BM_ChiSquaredQuantile);

void BM_RunScenario(benchmark::State& state) {
    const stands::ScenarioSpec spec = table1_spec(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(stands::run_scenario(spec));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunScenario)->Arg(500)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
