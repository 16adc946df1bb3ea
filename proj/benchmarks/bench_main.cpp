#include <benchmark/benchmark.h>

#include "rotlip/crofton.hpp"
#include "rotlip/flow.hpp"
#include "rotlip/gauss_link.hpp"
#include "rotlip/rotation.hpp"
#include "rotlip/scenarios.hpp"

using namespace rotlip;

static void BM_IntegrateSpiral(benchmark::State& state) {
  IntegratorConfig cfg;
  cfg.chord_tol = std::numeric_limits<Real>::infinity();
  cfg.observation_centers = {Vector::Zero(2)};
  for (auto _ : state) {
    const Curve c = integrate_trajectory(FieldSpec::spiral2d(), make_vector({0.5L, 0}), 0, state.range(0), cfg);
    benchmark::DoNotOptimize(c.size());
  }
}
BENCHMARK(BM_IntegrateSpiral)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_IntegrateTwist(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(twist_trajectory(0.025L, 0.2L).size());
}
BENCHMARK(BM_IntegrateTwist)->Unit(benchmark::kMillisecond);

static void BM_AbsoluteRotation(benchmark::State& state) {
  const Curve c = spiral_trajectory(10);
  for (auto _ : state) benchmark::DoNotOptimize(absolute_rotation_point(c, Vector::Zero(2)).value);
  state.counters["samples"] = static_cast<double>(c.size());
}
BENCHMARK(BM_AbsoluteRotation)->Unit(benchmark::kMillisecond);

static void BM_GaussHopf(benchmark::State& state) {
  const auto [a, b] = hopf_pair(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(linking_coefficient(a, b).raw);
}
BENCHMARK(BM_GaussHopf)->Arg(250)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

static void BM_GaussSinkPair(benchmark::State& state) {
  const Curve a = sink_trajectory(make_vector({1, 1, 0}), 3);
  const Curve b = sink_trajectory(make_vector({1, -1, 0}), 3);
  const auto mode = state.range(0) ? RotationMode::absolute : RotationMode::signed_;
  for (auto _ : state) benchmark::DoNotOptimize(gauss_rotation_pair(a, b, mode).value);
  state.counters["samples"] = static_cast<double>(a.size() + b.size());
}
BENCHMARK(BM_GaussSinkPair)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Crofton(benchmark::State& state) {
  const SphericalCurve s(circle(Vector::Zero(3), Vector::Unit(3, 0), Vector::Unit(3, 1), 1, 400));
  for (auto _ : state) benchmark::DoNotOptimize(crofton_length_estimate(s, state.range(0), 42).value);
}
BENCHMARK(BM_Crofton)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

static void BM_CircleWitness(benchmark::State& state) {
  std::vector<Real> t;
  std::vector<Vector> p;
  const auto n = state.range(0);
  for (long k = 0; k <= n; ++k) {
    const Real s = static_cast<Real>(k) / n;
    t.push_back(s);
    p.push_back(make_vector({std::cos(10 * kPi * s), std::sin(10 * kPi * s)}));
  }
  const Curve c = Curve::from_points(t, p, true);
  for (auto _ : state) benchmark::DoNotOptimize(find_circle_witness(c, 4.5L).v_proj_1);
}
BENCHMARK(BM_CircleWitness)->Arg(5000)->Arg(50000)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
