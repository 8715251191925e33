#include <benchmark/benchmark.h>

#include "qosc/qfourier.hpp"

namespace {

void fill(benchmark::State& state, qosc::FillMode mode) {
  const qosc::QParameters params = qosc::QParameters::oscillator(2.0);
  const qosc::SpectralWindow window = qosc::SpectralWindow::symmetric(static_cast<int>(state.range(0)));
  qosc::TransformOptions options;
  options.mode = mode;
  options.validate = 0;
  for (auto _ : state) {
    qosc::TransformMatrix M = qosc::build_transform(0.7, 0.5, params, window, {}, options);
    benchmark::DoNotOptimize(M.T_entries().data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(window.size() * window.size()));
}

void BM_FillSerial(benchmark::State& state) { fill(state, qosc::FillMode::Serial); }
void BM_FillParallel(benchmark::State& state) { fill(state, qosc::FillMode::Parallel); }

}  // namespace

BENCHMARK(BM_FillSerial)->Arg(15)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FillParallel)->Arg(15)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
