#include <benchmark/benchmark.h>

#include "pointopt/configurations.hpp"
#include "pointopt/kernels.hpp"
#include "pointopt/optimizer.hpp"
#include "pointopt/spectral.hpp"

using namespace pointopt;

static void BM_BesselK0(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_k0(x));
    x = x < 600.0 ? x * 1.1 : 0.1;
  }
}
BENCHMARK(BM_BesselK0);

static void BM_KreinAssembly(benchmark::State& state) {
  const Configuration cfg = random_config(Setting::Sphere, state.range(0), 42);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        krein_matrix(Setting::Sphere, -1.0, cfg, SpectralParam::kappa(1.0)));
}
BENCHMARK(BM_KreinAssembly)->Arg(6)->Arg(12)->Arg(32);

static void BM_GroundStateLoop(benchmark::State& state) {
  const Configuration cfg = random_config(Setting::Loop, state.range(0), 7);
  for (auto _ : state)
    benchmark::DoNotOptimize(ground_state_negative(Setting::Loop, -2.0, cfg));
}
BENCHMARK(BM_GroundStateLoop)->Arg(4)->Arg(8);

static void BM_SurfaceEnergy(benchmark::State& state) {
  const Configuration cfg = random_config(Setting::Sphere, state.range(0), 11);
  for (auto _ : state) benchmark::DoNotOptimize(surface_energy(cfg, 1.0));
}
BENCHMARK(BM_SurfaceEnergy)->Arg(12)->Arg(64);
