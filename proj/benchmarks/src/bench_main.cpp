#include <benchmark/benchmark.h>

#include <random>

#include "specbound/families.hpp"
#include "specbound/linalg.hpp"
#include "specbound/operators.hpp"
#include "specbound/regions.hpp"

using namespace specbound;

static void XiContains(benchmark::State& state) {
  const XiRegion xi(static_cast<double>(state.range(0)));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  std::vector<cplx> pts(4096);
  for (auto& z : pts) z = cplx(u(rng), u(rng));
  for (auto _ : state)
    for (const auto& z : pts) benchmark::DoNotOptimize(xi.contains(z));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(pts.size()));
}
BENCHMARK(XiContains)->Arg(2)->Arg(5);

static void AssemblePotential(benchmark::State& state) {
  const auto t2 = build_torus2(static_cast<int>(state.range(0)));
  const auto V = random_bandlimited(t2, 3, 1);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_potential(t2, V).matrix.data());
}
BENCHMARK(AssemblePotential)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void SchrodingerEig(benchmark::State& state) {
  const auto t2 = build_torus2(static_cast<int>(state.range(0)));
  const auto H = assemble_schrodinger(t2, random_bandlimited(t2, 3, 1), 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(spectrum(H).data());
}
BENCHMARK(SchrodingerEig)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

static void OpNorm(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const Eigen::MatrixXcd A = Eigen::MatrixXcd::Random(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(opnorm_p_pprime(A, 1.5, 3.0).value);
}
BENCHMARK(OpNorm)->RangeMultiplier(4)->Range(16, 256)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
