#include <benchmark/benchmark.h>

#include <vector>

#include "elsim/coeffs.hpp"
#include "elsim/diagnostics.hpp"
#include "elsim/presets.hpp"
#include "elsim/solver.hpp"

namespace {

using namespace elsim;

FieldState bench_state(int dim, int n) {
  const auto g = SpectralGrid::create(dim, n);
  auto s = make_perturbed_director(g, 0.2, 3, 7);
  s.u = make_taylor_green(g, 1.0).u;
  return prepare_initial_state(std::move(s), true);
}

void BM_ForwardInverse(benchmark::State& st) {
  const auto g = SpectralGrid::create(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  std::vector<double> real(g->size(), 1.0);
  std::vector<Complex> spec(g->spectral_size());
  for (auto _ : st) {
    g->forward(real, spec);
    g->inverse(spec, real);
    benchmark::DoNotOptimize(real.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<std::int64_t>(g->size()));
}
BENCHMARK(BM_ForwardInverse)->Args({2, 64})->Args({2, 256})->Args({3, 32})->Args({3, 64});

void BM_Bundle(benchmark::State& st) {
  const auto s = bench_state(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const ElModel model(from_alpha(1.0, 1.0));
  for (auto _ : st) benchmark::DoNotOptimize(model.bundle(s));
}
BENCHMARK(BM_Bundle)->Args({2, 64})->Args({3, 32})->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& st) {
  const auto s0 = bench_state(static_cast<int>(st.range(0)), static_cast<int>(st.range(1)));
  const ElModel model(from_alpha(1.0, 1.0));
  TimeStepperConfig cfg;
  cfg.dt = 1e-4;
  cfg.scheme = st.range(2) != 0 ? Scheme::ImexBdf2 : Scheme::SemiImplicitEuler;
  Integrator it(model, cfg);
  auto s = s0;
  for (auto _ : st) s = it.step(s);
}
BENCHMARK(BM_Step)
    ->Args({2, 64, 0})
    ->Args({2, 64, 1})
    ->Args({3, 32, 0})
    ->Unit(benchmark::kMillisecond);

void BM_Audit(benchmark::State& st) {
  const auto s = bench_state(2, 64);
  const ElModel model(from_alpha(1.0, 1.0));
  for (auto _ : st) benchmark::DoNotOptimize(dissipation_report(model, s));
}
BENCHMARK(BM_Audit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
