#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "krylab/matfunc.hpp"
#include "oracles.hpp"

using namespace krylab;

TEST_CASE("gauss_legendre integrates low-order polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(5, x, w);
  double mass = 0.0, x2 = 0.0, x8 = 0.0;
  for (int i = 0; i < 5; ++i) {
    mass += w[i];
    x2 += w[i] * x[i] * x[i];
    x8 += w[i] * std::pow(x[i], 8);
  }
  CHECK(mass == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(x2 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(x8 == doctest::Approx(2.0 / 9.0).epsilon(1e-13)); // degree 8 <= 2m-1
}

TEST_CASE("inverse-sqrt quadrature scalar certification") {
  const Quadrature q = make_invsqrt_quadrature(40, 1.0, 20.0);
  CHECK(q.certified_rel_error <= 1e-8);
  CHECK(q.evaluate(1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(q.evaluate(4.0) == doctest::Approx(0.5).epsilon(1e-8));
  for (double z : q.shifts) CHECK(z <= 0.0);
  for (double w : q.weights) CHECK(w > 0.0);
}

TEST_CASE("a single-node rule is coarse but valid") {
  const Quadrature q = make_invsqrt_quadrature(1, 1.0, 4.0);
  CHECK(q.shifts.size() == 1);
  CHECK(q.certified_rel_error > 1e-8); // reported, not a failure
  CHECK(q.evaluate(1.0) > 0.0);
}

TEST_CASE("quadrature input validation") {
  CHECK_THROWS_AS(make_invsqrt_quadrature(10, 0.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(make_invsqrt_quadrature(10, -1.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(make_invsqrt_quadrature(10, 2.0, 1.0), InvalidInputError);
  CHECK_THROWS_AS(make_invsqrt_quadrature(0, 1.0, 2.0), InvalidInputError);
}

TEST_CASE("reciprocal Arnoldi-FA is the FOM iterate, bit for bit") {
  const LinearOperator a = gen_spectrum_operator({{{1.0, 20.0, 20}}});
  const Vector b = ones_vector(20);
  const ArnoldiDecomposition dec = arnoldi_run(a, b, 12);
  for (int k = 1; k <= 12; ++k) {
    const Vector fa = arnoldi_fa(dec, k, FunctionSpec::reciprocal());
    const std::optional<Vector> fom = fom_solution(dec, k);
    REQUIRE(fom.has_value());
    CHECK(fa == *fom); // identical arithmetic path
  }
}

TEST_CASE("inverse-sqrt on a scaled identity") {
  DenseMatrix m(3, 3);
  for (int i = 0; i < 3; ++i) m(i, i) = 4.0;
  const LinearOperator a = LinearOperator::from_dense(m);
  const Vector b = unit_vector(3, 0);
  const ArnoldiDecomposition dec = arnoldi_run(a, b, 1);
  const Vector x = arnoldi_fa(dec, 1, FunctionSpec::inverse_sqrt(4.0, 4.0));
  CHECK(x[0] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(std::abs(x[1]) <= 1e-12);
}

TEST_CASE("full-dimension inverse-sqrt matches the eigendecomposition reference") {
  const LinearOperator a = gen_spectrum_operator({{{1.0, 20.0, 20}}});
  const Vector b = ones_vector(20);
  const Vector ref = reference_fab(a, b, FunctionSpec::inverse_sqrt(1.0, 20.0));
  const ArnoldiDecomposition dec = arnoldi_run(a, b, 20);
  const Vector x = arnoldi_fa(dec, dec.steps(), FunctionSpec::inverse_sqrt(1.0, 20.0));
  Vector diff = ref;
  add_scaled(diff, -1.0, x);
  CHECK(norm2(diff) <= 1e-7 * norm2(ref));
}

TEST_CASE("reference_fab basics") {
  const LinearOperator ident = LinearOperator::from_dense(DenseMatrix::identity(4));
  const Vector b = oracles::random_vector(4, 8);
  for (const FunctionSpec &f : {FunctionSpec::reciprocal(), FunctionSpec::inverse_sqrt(1.0, 1.0)}) {
    const Vector y = reference_fab(ident, b, f);
    for (int i = 0; i < 4; ++i) CHECK(y[i] == doctest::Approx(b[i]).epsilon(1e-12));
  }

  DenseMatrix d(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const Vector y = reference_fab(LinearOperator::from_dense(d), {1.0, 1.0},
                                 FunctionSpec::inverse_sqrt(4.0, 9.0));
  CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(y[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("reference_fab rejects invalid inverse-sqrt inputs") {
  DenseMatrix asym(2, 2);
  asym(0, 1) = 1.0;
  asym(1, 1) = 1.0;
  CHECK_THROWS_AS(reference_fab(LinearOperator::from_dense(asym), {1.0, 1.0},
                                FunctionSpec::inverse_sqrt(1.0, 2.0)),
                  InvalidInputError);

  DenseMatrix indef(2, 2);
  indef(0, 0) = -1.0;
  indef(1, 1) = 2.0;
  CHECK_THROWS_AS(reference_fab(LinearOperator::from_dense(indef), {1.0, 1.0},
                                FunctionSpec::inverse_sqrt(1.0, 2.0)),
                  InvalidInputError);
}

TEST_CASE("reciprocal reference matches the final FOM iterate at breakdown") {
  const PrescribedInstance inst = build_prescribed_instance({2.0, 0.5, 3.0});
  const LinearOperator op = inst.op();
  const Vector ref = reference_fab(op, inst.b, FunctionSpec::reciprocal());
  const ArnoldiDecomposition dec = arnoldi_run(op, inst.b, 3);
  REQUIRE(dec.breakdown());
  const std::optional<Vector> x = fom_solution(dec, dec.steps());
  REQUIRE(x.has_value());
  Vector diff = ref;
  add_scaled(diff, -1.0, *x);
  CHECK(norm2(diff) <= 1e-10 * norm2(ref));
}

TEST_CASE("quadrature consistency: Arnoldi-FA equals the weighted shifted-FOM sum") {
  const LinearOperator a = gen_spectrum_operator({{{1.0, 20.0, 20}}});
  const Vector b = ones_vector(20);
  const ArnoldiDecomposition dec = arnoldi_run(a, b, 10);
  const FunctionSpec f = FunctionSpec::inverse_sqrt(1.0, 20.0);
  const Quadrature q = make_invsqrt_quadrature(f.quad_nodes, f.lambda_min, f.lambda_max);

  for (int k : {3, 10}) {
    // shifted FOM iterates through the SAME decomposition
    Vector sum(a.dim(), 0.0);
    for (std::size_t i = 0; i < q.shifts.size(); ++i) {
      DenseMatrix hk = dec.hessenberg_square(k);
      for (int d = 0; d < k; ++d) hk(d, d) -= q.shifts[i];
      Vector e1(k, 0.0);
      e1[0] = 1.0;
      const auto y = solve_hessenberg(hk, e1);
      REQUIRE(y.has_value());
      Vector xi(a.dim(), 0.0);
      for (int j = 0; j < k; ++j) add_scaled(xi, dec.beta() * (*y)[j], dec.basis()[j]);
      add_scaled(sum, q.weights[i], xi);
    }
    const Vector fa = arnoldi_fa(dec, k, f);
    Vector diff = fa;
    add_scaled(diff, -1.0, sum);
    CHECK(norm2(diff) <= 1e-12 * norm2(fa));
  }
}

TEST_CASE("near-optimality report on an SPD spectrum") {
  const LinearOperator a = gen_spectrum_operator({{{1.0, 20.0, 20}}});
  const Vector b = ones_vector(20);
  const MatFuncReport rep = near_opt_report(a, b, 20, FunctionSpec::inverse_sqrt(1.0, 20.0));
  REQUIRE_FALSE(rep.rows.empty());
  CHECK(rep.quad_certified_rel_error <= 1e-8);

  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    CHECK(rep.rows[i].best_error <= rep.rows[i - 1].best_error + 1e-12 * rep.ref_norm);
  }
  for (const MatFuncRow &row : rep.rows) {
    if (!row.ratio) continue;
    // optimality of the projection baseline, away from the noise floor
    if (row.best_error >= 1e-6 * rep.ref_norm) CHECK(*row.ratio >= 1.0 - 1e-10);
    CHECK(*row.ratio < 100.0); // regression guard for the corpus
  }
  // full dimension: both errors vanish, ratio excluded
  const MatFuncRow &last = rep.rows.back();
  CHECK(last.fa_error <= 1e-9 * rep.ref_norm);
  CHECK(last.best_error <= 1e-9 * rep.ref_norm);
  CHECK_FALSE(last.ratio.has_value());
}

TEST_CASE("reciprocal near-optimality errors equal the FOM error norms") {
  const LinearOperator a = gen_spectrum_operator({{{1.0, 20.0, 20}}});
  const Vector b = ones_vector(20);
  const MatFuncReport rep = near_opt_report(a, b, 15, FunctionSpec::reciprocal());
  const ConvergenceHistory h = run_history(a, b, 15, /*with_errors=*/true);
  REQUIRE(rep.rows.size() + 1 == h.records.size());
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const ResidualNorm &fe = h.records[i + 1].fom_error;
    REQUIRE_FALSE(fe.is_infinite());
    CHECK(std::abs(rep.rows[i].fa_error - fe.value()) <= 1e-9 * rep.ref_norm);
  }
}

TEST_CASE("projection is optimal over random coefficient vectors") {
  const LinearOperator a = gen_spectrum_operator({{{1.0, 20.0, 20}}});
  const Vector b = ones_vector(20);
  const ArnoldiDecomposition dec = arnoldi_run(a, b, 6);
  const Vector ref = reference_fab(a, b, FunctionSpec::inverse_sqrt(1.0, 20.0));

  const int k = 6;
  Vector proj = ref;
  for (int j = 0; j < k; ++j) add_scaled(proj, -dot(dec.basis()[j], ref), dec.basis()[j]);
  const double best = norm2(proj);

  for (std::uint64_t t = 0; t < 100; ++t) {
    const Vector c = oracles::random_vector(k, 4000 + t, -2.0, 2.0);
    Vector candidate = ref;
    for (int j = 0; j < k; ++j) add_scaled(candidate, -c[j], dec.basis()[j]);
    CHECK(best <= norm2(candidate) + 1e-12 * norm2(ref));
  }
}
