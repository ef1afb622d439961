#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "krylab/arnoldi.hpp"
#include "krylab/solvers.hpp"
#include "oracles.hpp"

using namespace krylab;

TEST_CASE("arnoldi start normalizes b") {
  const LinearOperator a = LinearOperator::from_dense(DenseMatrix::identity(3));
  const ArnoldiDecomposition dec = ArnoldiDecomposition::start(a, {3.0, 0.0, 0.0});
  CHECK(dec.beta() == 3.0);
  CHECK(dec.steps() == 0);
  CHECK(dec.basis()[0] == Vector{1.0, 0.0, 0.0});

  const LinearOperator a4 = LinearOperator::from_dense(DenseMatrix::identity(4));
  const ArnoldiDecomposition dec4 = ArnoldiDecomposition::start(a4, ones_vector(4));
  CHECK(dec4.beta() == doctest::Approx(2.0).epsilon(1e-15));
  for (double q : dec4.basis()[0]) CHECK(q == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(ArnoldiDecomposition::start(a, Vector(3, 0.0)), InvalidInputError);
}

TEST_CASE("identity operator breaks down at the first step") {
  const LinearOperator a = LinearOperator::from_dense(DenseMatrix::identity(5));
  ArnoldiDecomposition dec = ArnoldiDecomposition::start(a, oracles::random_vector(5, 1));
  dec.extend(a);
  CHECK(dec.steps() == 1);
  CHECK(dec.breakdown());
  CHECK(dec.breakdown_step() == 1);
  CHECK(dec.h(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dec.h(1, 0) <= 1e-12);
  // breakdown means the exact solution lives in the Krylov space
  const FomResult fom = fom_iterate(dec, a, 1);
  CHECK(fom.direct.value() <= 1e-10 * dec.beta());
  CHECK_THROWS_AS(dec.extend(a), InvalidStateError);
}

TEST_CASE("prescribed bidiagonal instance makes Arnoldi exact") {
  const PrescribedInstance inst = build_prescribed_instance({3.0, 1.0, 4.0, 1.0, 5.0});
  const LinearOperator op = inst.op();
  const ArnoldiDecomposition dec = arnoldi_run(op, inst.b, 4);
  REQUIRE(dec.steps() == 4);
  // basis columns are identity columns
  for (int j = 0; j < dec.basis_size(); ++j) {
    for (int i = 0; i < op.dim(); ++i) {
      CHECK(std::abs(dec.basis()[j][i] - (i == j ? 1.0 : 0.0)) <= 1e-14);
    }
  }
  // H equals the leading block of A entrywise
  const DenseMatrix h = dec.hessenberg(4);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 4; ++j) CHECK(std::abs(h(i, j) - inst.a(i, j)) <= 1e-14);
}

TEST_CASE("one hand-computed MGS step on diag(1,2)") {
  const LinearOperator a = gen_spectrum_operator({{{1.0, 2.0, 2}}});
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  ArnoldiDecomposition dec = ArnoldiDecomposition::start(a, {inv_sqrt2, inv_sqrt2});
  dec.extend(a);
  CHECK(dec.h(0, 0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(dec.h(1, 0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("arnoldi_run with k_max = 0 is the start state") {
  const LinearOperator a = random_sparse_operator(10, 0.3, 2);
  const ArnoldiDecomposition dec = arnoldi_run(a, ones_vector(10), 0);
  CHECK(dec.steps() == 0);
  CHECK(dec.basis_size() == 1);
}

TEST_CASE("arnoldi invariants on a random sparse operator") {
  const LinearOperator a = random_sparse_operator(60, 0.1, 9);
  const ArnoldiDecomposition dec = arnoldi_run(a, ones_vector(60), 30);
  REQUIRE(dec.steps() == 30);
  CHECK(dec.orthogonality_defect() <= 1e-10);
  const DenseMatrix h = dec.hessenberg(30);
  CHECK(dec.relation_residual(a) <= 1e-12 * 30 * h.frobenius_norm());
  for (int j = 0; j < 30; ++j) CHECK(dec.h(j + 1, j) >= 0.0);
}

TEST_CASE("arnoldi invariants on the spectrum operator") {
  SpectrumSpec spec;
  spec.intervals.push_back({-10.0, -1.0, 250});
  spec.intervals.push_back({1.0, 20.0, 250});
  const LinearOperator a = gen_spectrum_operator(spec);
  const ArnoldiDecomposition dec = arnoldi_run(a, ones_vector(500), 80);
  REQUIRE(dec.steps() == 80);
  CHECK(dec.orthogonality_defect() <= 1e-10);
  CHECK(dec.relation_residual(a) <= 1e-12 * 80 * dec.hessenberg(80).frobenius_norm());
}

TEST_CASE("reorthogonalization flag is honored") {
  const LinearOperator a = random_sparse_operator(40, 0.2, 31);
  ArnoldiOptions opts;
  opts.reorthogonalize = false;
  const ArnoldiDecomposition plain = arnoldi_run(a, ones_vector(40), 20, opts);
  CHECK(plain.steps() == 20);
  CHECK_FALSE(plain.options().reorthogonalize);
  // the recurrence relation holds by construction even when plain MGS
  // loses orthogonality near convergence
  CHECK(plain.relation_residual(a) <= 1e-12 * 20 * plain.hessenberg(20).frobenius_norm());

  const ArnoldiDecomposition reorth = arnoldi_run(a, ones_vector(40), 20);
  CHECK(reorth.orthogonality_defect() <= plain.orthogonality_defect());
  CHECK(reorth.orthogonality_defect() <= 1e-10);
}

TEST_CASE("extending past the space dimension throws") {
  const LinearOperator a = random_sparse_operator(4, 0.5, 8);
  ArnoldiDecomposition dec = arnoldi_run(a, ones_vector(4), 4);
  if (!dec.breakdown()) CHECK_THROWS_AS(dec.extend(a), InvalidStateError);
  CHECK_THROWS_AS(arnoldi_run(a, ones_vector(4), 5), InvalidInputError);
}
