#include <benchmark/benchmark.h>

#include <complex>
#include <numbers>

#include "vortexlab/fourier.hpp"
#include "vortexlab/holonomy.hpp"
#include "vortexlab/isoperimetric.hpp"
#include "vortexlab/loops.hpp"
#include "vortexlab/vortex.hpp"

using namespace vortexlab;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

loops::PairLoop bench_pair(int N) {
  auto loop = loops::DiscreteLoop::from_function(N, 1, [](double t) {
    geom::PointC p(1);
    p(0) = 2.0 * std::polar(1.0, kTwoPi * t) + std::complex<double>(0.1 * std::cos(2 * kTwoPi * t),
                                                                    0.07 * std::sin(3 * kTwoPi * t));
    return p;
  });
  auto pair = loops::PairLoop::zero_xi(std::move(loop), 1);
  for (int i = 0; i < N; ++i) pair.xi(i, 0) = 0.3 * std::sin(kTwoPi * i / N);
  return pair;
}

void BM_spectral_derivative(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  Eigen::VectorXcd f(N);
  for (int i = 0; i < N; ++i) f(i) = std::polar(1.0, kTwoPi * i / N);
  for (auto _ : state) benchmark::DoNotOptimize(fft::spectral_derivative(f));
}
BENCHMARK(BM_spectral_derivative)->Arg(256)->Arg(512)->Arg(1024);

void BM_invariant_action(benchmark::State& state) {
  const auto act = geom::TorusAction::standard_rotation();
  const auto pair = bench_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loops::invariant_action(pair, act));
}
BENCHMARK(BM_invariant_action)->Arg(128)->Arg(256)->Arg(512);

void BM_horizontal_gauge(benchmark::State& state) {
  const auto act = geom::TorusAction::standard_rotation();
  const auto pair = bench_pair(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(loops::horizontal_gauge(pair.x, act));
}
BENCHMARK(BM_horizontal_gauge)->Arg(256)->Arg(512);

void BM_holonomy(benchmark::State& state) {
  const auto chart = holonomy::ConnectionChart::from_function(
      holonomy::Group::torus, 1, -1, 1, -1, 1, 65, 65,
      [](double x, double y, Eigen::VectorXd& a1, Eigen::VectorXd& a2) {
        a1 = Eigen::VectorXd::Constant(1, -0.25 * y);
        a2 = Eigen::VectorXd::Constant(1, 0.25 * x);
      });
  const auto loop = loops::DiscreteLoop::circle(0.5, 1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(holonomy::holonomy(chart, loop));
}
BENCHMARK(BM_holonomy)->Arg(256)->Arg(1024);

void BM_solve_radial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(vortex::solve_radial(1, 1.0, 4.0, {}));
}
BENCHMARK(BM_solve_radial)->Unit(benchmark::kMillisecond);

void BM_isoperi_trial(benchmark::State& state) {
  isoperi::VerifierConfig cfg;
  geom::PointC base(1);
  base(0) = std::complex<double>(2.0, 0.0);
  cfg.region = {base};
  cfg.trials = 8;
  cfg.N = 256;
  for (auto _ : state) benchmark::DoNotOptimize(isoperi::verify_batch(cfg));
}
BENCHMARK(BM_isoperi_trial)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
