#include <benchmark/benchmark.h>

#include "krylab/arnoldi.hpp"
#include "krylab/matfunc.hpp"
#include "krylab/rng.hpp"
#include "krylab/solvers.hpp"

using namespace krylab;

namespace {

SpectrumSpec paper_spectrum() {
  SpectrumSpec spec;
  spec.intervals.push_back({-10.0, -1.0, 250});
  spec.intervals.push_back({1.0, 20.0, 250});
  return spec;
}

void BM_csr_apply(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const LinearOperator a = random_sparse_operator(n, 0.05, 11);
  const Vector v = ones_vector(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.apply(v));
  }
}
BENCHMARK(BM_csr_apply)->Arg(200)->Arg(1000);

void BM_arnoldi_run(benchmark::State &state) {
  const int k = static_cast<int>(state.range(0));
  const LinearOperator a = gen_spectrum_operator(paper_spectrum());
  const Vector b = ones_vector(500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(arnoldi_run(a, b, k));
  }
}
BENCHMARK(BM_arnoldi_run)->Arg(20)->Arg(80);

void BM_gmres_iterate(benchmark::State &state) {
  const int k = static_cast<int>(state.range(0));
  const LinearOperator a = gen_spectrum_operator(paper_spectrum());
  const Vector b = ones_vector(500);
  const ArnoldiDecomposition dec = arnoldi_run(a, b, k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gmres_iterate(dec, a, k));
  }
}
BENCHMARK(BM_gmres_iterate)->Arg(40)->Arg(80);

void BM_fom_iterate(benchmark::State &state) {
  const int k = static_cast<int>(state.range(0));
  const LinearOperator a = gen_spectrum_operator(paper_spectrum());
  const Vector b = ones_vector(500);
  const ArnoldiDecomposition dec = arnoldi_run(a, b, k);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fom_iterate(dec, a, k));
  }
}
BENCHMARK(BM_fom_iterate)->Arg(40)->Arg(80);

void BM_lu_solve(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  const DenseMatrix a = random_sparse_operator(n, 0.2, 5).to_dense();
  const Vector rhs = ones_vector(n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(lu_solve(a, rhs));
  }
}
BENCHMARK(BM_lu_solve)->Arg(100)->Arg(300);

void BM_jacobi_eigh(benchmark::State &state) {
  const int n = static_cast<int>(state.range(0));
  DenseMatrix a(n, n);
  Rng rng(3);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = rng.uniform(-1.0, 1.0);
      a(i, j) = v;
      a(j, i) = v;
    }
  for (auto _ : state) {
    benchmark::DoNotOptimize(jacobi_eigh(a));
  }
}
BENCHMARK(BM_jacobi_eigh)->Arg(50)->Arg(100);

void BM_invsqrt_quadrature(benchmark::State &state) {
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(make_invsqrt_quadrature(m, 1.0, 20.0));
  }
}
BENCHMARK(BM_invsqrt_quadrature)->Arg(40)->Arg(200);

} // namespace

BENCHMARK_MAIN();
