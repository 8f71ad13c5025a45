#include <benchmark/benchmark.h>

#include <vector>

#include "vcwave/coeffs.hpp"
#include "vcwave/modal_sim.hpp"
#include "vcwave/modal_state.hpp"
#include "vcwave/resolvent.hpp"
#include "vcwave/rng.hpp"

namespace {

using namespace vcwave;

CanonicalForm rotation_form() {
  CanonicalForm f;
  f.kind = CanonicalKind::Rotation;
  f.a = 1.0;
  f.b = 1.0;
  return f;
}

void MatrixExponential(benchmark::State& state) {
  const ModeBlock block = mode_block(rotation_form(), state.range(0));
  const double t = 50.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(matrix_exponential(t * block.matrix));
  }
}
BENCHMARK(MatrixExponential)->Arg(1)->Arg(16)->Arg(64);

void EvolveTrace(benchmark::State& state) {
  Lcg64 rng(1);
  const ModalState init = random_modal_state(rng, state.range(0));
  std::vector<double> times(201);
  for (int i = 0; i < 201; ++i) times[i] = 50.0 * i / 200.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate(rotation_form(), init, times));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(EvolveTrace)->Arg(8)->Arg(32)->Arg(64)->Complexity();

void ResolventKernel(benchmark::State& state) {
  const CanonicalForm f = rotation_form();
  const int n = state.range(0);
  double xi = n - 0.37;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mode_resolvent_norm(f, n, xi, 1.0));
  }
}
BENCHMARK(ResolventKernel)->Arg(1)->Arg(40)->Arg(160);

void SweepSmall(benchmark::State& state) {
  const CanonicalForm f = rotation_form();
  for (auto _ : state) {
    benchmark::DoNotOptimize(resolvent_sup(f, 10.0, 0.05, 36));
  }
}
BENCHMARK(SweepSmall);

}  // namespace

BENCHMARK_MAIN();
