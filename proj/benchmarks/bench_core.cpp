#include <benchmark/benchmark.h>

#include <random>

#include "magobs/obs.hpp"
#include "magobs/quasimode.hpp"
#include "magobs/spectral.hpp"
#include "magobs/weyl.hpp"

using namespace magobs;

namespace {

VectorPotential toy() {
  return {FourierField2D::cosine({0, 1}, 1.0), FourierField2D::cosine({1, 0}, 0.3)};
}

const Region& two_strips() {
  static const Region r =
      Region::from_rects({{0, kTwoPi, -0.5, 0.5}, {0, kTwoPi, kPi - 0.5, kPi + 0.5}});
  return r;
}

void BM_Assemble(benchmark::State& state) {
  const ModeBasis basis(static_cast<int>(state.range(0)));
  const auto a = toy();
  const auto v = FourierField2D::cosine({1, 1}, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(assemble(a, v, basis));
  state.SetLabel("dim " + std::to_string(basis.size()));
}
BENCHMARK(BM_Assemble)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Eigendecompose(benchmark::State& state) {
  const auto h = assemble(toy(), FourierField2D(0), ModeBasis(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(eigendecompose(h));
  state.SetLabel("dim " + std::to_string(h.dim()));
}
BENCHMARK(BM_Eigendecompose)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Quantize(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const Symbol s = Symbol::product(
      FourierField2D::random_real(2, rng),
      {[](double xi, double eta) { return cplx{std::exp(-xi * xi - eta * eta)}; }, -1, false});
  const ModeBasis basis(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(quantize(s, 1.0 / 16, basis));
}
BENCHMARK(BM_Quantize)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Gramian(benchmark::State& state) {
  const ModeBasis basis(static_cast<int>(state.range(0)));
  const auto eig = eigendecompose(assemble(toy(), FourierField2D(0), basis));
  const auto m = region_mass_matrix(two_strips(), basis);
  for (auto _ : state) benchmark::DoNotOptimize(gramian(eig, m, 1.0));
}
BENCHMARK(BM_Gramian)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MassMatrix(benchmark::State& state) {
  const ModeBasis basis(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(region_mass_matrix(two_strips(), basis));
}
BENCHMARK(BM_MassMatrix)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_BuildWkb(benchmark::State& state) {
  const auto cos_y = CircleFunction::from_modes(kTwoPi, {{1, 0.5}, {-1, 0.5}});
  const auto a2 = CircleFunction::from_modes(kTwoPi, {{0, 0.3}, {1, cplx(0, -0.1)}, {-1, cplx(0, 0.1)}});
  const auto p = extract_params_from_fields(cos_y, a2, CircleFunction(), 0.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_wkb(p, 0.05));
}
BENCHMARK(BM_BuildWkb);

void BM_Residual(benchmark::State& state) {
  const auto cos_y = CircleFunction::from_modes(kTwoPi, {{1, 0.5}, {-1, 0.5}});
  const auto p = extract_params_from_fields(cos_y, CircleFunction(), CircleFunction(), 0.0, 1.0);
  const auto ops = profiles_from(p);
  for (auto _ : state) benchmark::DoNotOptimize(residual(p, ops, 0.05, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_Residual)->Arg(4096)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
