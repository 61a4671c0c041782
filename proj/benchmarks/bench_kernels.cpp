#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "trefftz/analysis.hpp"
#include "trefftz/assembly.hpp"
#include "trefftz/mesh.hpp"
#include "trefftz/regsolve.hpp"
#include "trefftz/specialfn.hpp"
#include "trefftz/svd.hpp"
#include "trefftz/waves.hpp"

using namespace trefftz;

namespace
{

Mesh bench_mesh() { return build_rect_mesh({0.0, -0.5}, {1.0, 0.5}, 4, 5, 0.2, 1); }

void BM_EdgeIntegral(benchmark::State &state)
{
  const std::array<Vec2, 3> tri{Vec2{0.0, 0.0}, Vec2{0.3, 0.05}, Vec2{0.1, 0.25}};
  const auto waves = sample_basis(tri, 64, 16.0, BasisMode::EPW, 0);
  std::size_t i = 0;
  for (auto _ : state)
  {
    const auto &a = waves[i % waves.size()];
    const auto &b = waves[(i * 7 + 3) % waves.size()];
    benchmark::DoNotOptimize(edge_integral(tri[0], tri[1], a, b));
    ++i;
  }
}
BENCHMARK(BM_EdgeIntegral);

void BM_ComplexSvd(benchmark::State &state)
{
  const auto rows = static_cast<Eigen::Index>(state.range(0));
  const auto cols = static_cast<Eigen::Index>(state.range(1));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd A(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
  {
    for (Eigen::Index i = 0; i < rows; ++i)
    {
      A(i, j) = {normal(rng), normal(rng)};
    }
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(complex_svd(A));
  }
}
BENCHMARK(BM_ComplexSvd)->Args({64, 58})->Args({141, 128})->Unit(benchmark::kMillisecond);

void BM_SampleBasis(benchmark::State &state)
{
  const std::array<Vec2, 3> tri{Vec2{0.0, 0.0}, Vec2{0.3, 0.05}, Vec2{0.1, 0.25}};
  const int P = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(sample_basis(tri, P, 16.0, BasisMode::EPW, 0));
  }
}
BENCHMARK(BM_SampleBasis)->Arg(32)->Arg(128);

void BM_AssembleD(benchmark::State &state)
{
  const Mesh mesh = bench_mesh();
  BasisConfig config;
  config.trial_per_element = static_cast<int>(state.range(0));
  config.kappa = 16.0;
  config.mode = BasisMode::EPW;
  const auto bases = build_bases(mesh, config);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(assemble_D(mesh, bases));
  }
}
BENCHMARK(BM_AssembleD)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolvePointSource(benchmark::State &state)
{
  const Mesh mesh = bench_mesh();
  const double kappa = 16.0;
  BasisConfig config;
  config.trial_per_element = static_cast<int>(state.range(0));
  config.kappa = kappa;
  config.mode = BasisMode::EPW;
  const auto bases = build_bases(mesh, config);
  const Vec2 source{-std::numbers::pi / (5.0 * kappa), 0.0};
  const ReferenceField u = [source, kappa](const Vec2 &x) { return fundamental_solution(x, source, kappa); };
  const BoundaryDatum g = manufacture_g(u, 1.0, kappa);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(solve_problem(mesh, bases, {}, g, kDefaultEpsilon));
  }
}
BENCHMARK(BM_SolvePointSource)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
