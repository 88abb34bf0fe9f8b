#include <benchmark/benchmark.h>

#include "sphericity/context.hpp"
#include "sphericity/finite_field.hpp"
#include "sphericity/flag.hpp"
#include "sphericity/linalg.hpp"
#include "sphericity/numeric.hpp"
#include "sphericity/orbit.hpp"
#include "sphericity/partition.hpp"

namespace {

using namespace sphericity;

MatQ seeded_rational_matrix(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  MatQ m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j)
      m(i, j) = Rational(static_cast<long>(rng.below(201)) - 100);
  return m;
}

AlgebraContext gl6_context() { return build_gl6_example(); }

void BM_RankExact(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  MatQ m = seeded_rational_matrix(n, n, 11);
  for (auto _ : state) {
    MatQ copy = m;
    benchmark::DoNotOptimize(rref_exact(copy));
  }
}
BENCHMARK(BM_RankExact)->Arg(8)->Arg(16)->Arg(32);

void BM_OrbitDimOracle(benchmark::State& state) {
  Partition p({3, 2, 1});
  for (auto _ : state) {
    MatQ ad = ad_matrix(jordan_matrix(p));
    benchmark::DoNotOptimize(rank_exact(ad));
  }
}
BENCHMARK(BM_OrbitDimOracle);

void BM_JordanTypeExact(benchmark::State& state) {
  Rng rng(5);
  MatQ x = sample_orbit_point(Partition({3, 2, 1}), rng);
  for (auto _ : state) benchmark::DoNotOptimize(jordan_type_exact(x));
}
BENCHMARK(BM_JordanTypeExact);

void BM_JordanTypeFloat(benchmark::State& state) {
  Rng rng(5);
  MatD x = to_float(sample_orbit_point(Partition({3, 2, 1}), rng));
  for (auto _ : state) benchmark::DoNotOptimize(jordan_type_float(x));
}
BENCHMARK(BM_JordanTypeFloat);

void BM_SlicePenalty(benchmark::State& state) {
  AlgebraContext ctx = gl6_context();
  Partition p = ctx.richardson();
  Rng rng(7);
  VecD v(ctx.slice_dim());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.gaussian();
  VecD grad(v.size());
  for (auto _ : state)
    benchmark::DoNotOptimize(slice_penalty(ctx, p, v, &grad));
}
BENCHMARK(BM_SlicePenalty);

void BM_StabilizerFloat(benchmark::State& state) {
  AlgebraContext ctx = gl6_context();
  Rng rng(9);
  VecD w(ctx.flag_dim());
  for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.gaussian();
  MatD g = big_cell_rep_f(ctx, w);
  for (auto _ : state)
    benchmark::DoNotOptimize(stabilizer_subalgebra_float(ctx, g));
}
BENCHMARK(BM_StabilizerFloat);

void BM_FfScan(benchmark::State& state) {
  ContextInput in;
  in.n = 3;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) in.h_basis.push_back(unit_matrix(3, i, j));
  in.chi.assign(in.h_basis.size(), Rational(0));
  in.parabolic = Composition({1, 1, 1});
  AlgebraContext ctx(in);
  const long q = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(ff_count_slice(ctx, q));
}
BENCHMARK(BM_FfScan)->Arg(7)->Arg(13);

}  // namespace

BENCHMARK_MAIN();
