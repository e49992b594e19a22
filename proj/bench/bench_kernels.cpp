// Serial vs OpenMP discrete kernels, plus an end-to-end Rayleigh minimization.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ptone/kernels.hpp"
#include "ptone/rayleigh.hpp"

namespace {

struct Fixture {
  std::vector<double> h, wmid, cell, mass, u, out;

  explicit Fixture(std::size_t n) : h(n - 1), wmid(n - 1), cell(n), mass(n), u(n), out(n) {
    const double dx = 1.0 / static_cast<double>(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
      const double mid = (static_cast<double>(j) + 0.5) * dx;
      h[j] = dx;
      wmid[j] = mid * mid;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) * dx;
      cell[i] = dx;
      mass[i] = t * t * dx;
      u[i] = std::cos(1.5707963267948966 * t);
    }
  }
};

constexpr double kP = 3.0;

template <double (*Energy)(std::span<const double>, std::span<const double>, std::span<const double>, double)>
void BM_energy(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Energy(f.h, f.wmid, f.u, kP));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <double (*Mass)(std::span<const double>, std::span<const double>, double)>
void BM_mass(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Mass(f.mass, f.u, kP));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <void (*Grad)(std::span<const double>, std::span<const double>, std::span<const double>, double,
                       std::span<double>)>
void BM_gradient(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Grad(f.h, f.wmid, f.u, kP, f.out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <void (*Div)(std::span<const double>, std::span<const double>, std::span<const double>,
                      std::span<const double>, double, std::span<double>)>
void BM_divergence(benchmark::State& state) {
  Fixture f(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    Div(f.h, f.wmid, f.cell, f.u, kP, f.out);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_minimize(benchmark::State& state) {
  const auto grid = ptone::Grid1D::for_problem(ptone::RadialProblem::space_form_ball(kP, 3, 0.0, 1.0),
                                               static_cast<std::size_t>(state.range(0)));
  ptone::RayleighOptions opt;
  opt.parallel = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(ptone::minimize_rayleigh(grid, kP, opt).lambda_est);
}

using namespace ptone::kernels;

BENCHMARK(BM_energy<p_energy_serial>)->Name("p_energy/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_energy<p_energy_parallel>)->Name("p_energy/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_mass<p_mass_serial>)->Name("p_mass/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_mass<p_mass_parallel>)->Name("p_mass/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_gradient<p_energy_gradient_serial>)
    ->Name("gradient/serial")
    ->RangeMultiplier(8)
    ->Range(1 << 10, 1 << 22);
BENCHMARK(BM_gradient<p_energy_gradient_parallel>)->Name("gradient/omp")->RangeMultiplier(8)->Range(1 << 10, 1 << 22);
BENCHMARK(BM_divergence<flux_divergence_serial>)
    ->Name("flux_divergence/serial")
    ->RangeMultiplier(8)
    ->Range(1 << 10, 1 << 22);
BENCHMARK(BM_divergence<flux_divergence_parallel>)
    ->Name("flux_divergence/omp")
    ->RangeMultiplier(8)
    ->Range(1 << 10, 1 << 22);
BENCHMARK(BM_minimize)->ArgsProduct({{1000, 4000}, {0, 1}})->ArgNames({"n", "omp"})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
