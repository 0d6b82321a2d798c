#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "fraclap/frac_operator.hpp"
#include "fraclap/rng.hpp"

using namespace fraclap;

TEST_CASE("matrix power agrees with the dense eigensolver route") {
  const DomainSpec dom{1, {1.0}, {12}};
  const EigenBasis b = build_basis(dom);

  // reference: eigendecompose the assembled operator with a generic solver
  const double h = dom.spacing(0);
  Matrix a2 = Matrix::Zero(12, 12);
  for (int i = 0; i < 12; ++i) {
    a2(i, i) = 2.0 / (h * h);
    if (i > 0) a2(i, i - 1) = -1.0 / (h * h);
    if (i + 1 < 12) a2(i, i + 1) = -1.0 / (h * h);
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(a2);
  const double s = 0.6;
  const Matrix ref = es.eigenvectors() *
                     es.eigenvalues().array().pow(s).matrix().asDiagonal() *
                     es.eigenvectors().transpose();

  FracOperator op(b, s);
  CHECK((op.dense() - ref).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("operator is symmetric positive definite on random data") {
  const EigenBasis b = build_basis({2, {1.0, 1.0}, {6, 6}});
  FracOperator op(b, 0.5);
  const Matrix& a = op.dense();
  CHECK((a - a.transpose()).cwiseAbs().maxCoeff() < 1e-10);
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    const GridFunction v(b.domain, rng.normal_vector(b.size()));
    if (v.values().cwiseAbs().maxCoeff() == 0.0) continue;
    CHECK(op.energy_inner(v, v) > 0.0);
  }
}

TEST_CASE("energy pairing is self-adjoint") {
  const EigenBasis b = build_basis({1, {1.0}, {18}});
  FracOperator op(b, 0.35, 0.7);
  Rng rng(9);
  const GridFunction v(b.domain, rng.normal_vector(b.size()));
  const GridFunction w(b.domain, rng.normal_vector(b.size()));
  CHECK(op.energy_inner(v, w) == doctest::Approx(op.energy_inner(w, v)).epsilon(1e-12));
  CHECK(op.energy_inner(v, w) == doctest::Approx(l2_inner(b, op.apply(v), w)).epsilon(1e-12));
}

TEST_CASE("solve inverts apply, with and without a shift") {
  const EigenBasis b = build_basis({1, {2.0}, {20}});
  Rng rng(17);
  for (double shift : {0.0, 1.0 / 0.05}) {
    FracOperator op(b, 0.5, shift);
    const GridFunction f(b.domain, rng.normal_vector(b.size()));
    const GridFunction u = op.solve(f);
    CHECK((op.apply(u).values() - f.values()).cwiseAbs().maxCoeff() <
          1e-9 * (1.0 + f.values().cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("powers compose: applying s1 then s2 equals s1 + s2") {
  const EigenBasis b = build_basis({1, {1.0}, {14}});
  FracOperator op1(b, 0.3), op2(b, 0.45), op3(b, 0.75);
  Rng rng(23);
  const GridFunction v(b.domain, rng.normal_vector(b.size()));
  const GridFunction lhs = op2.apply(op1.apply(v));
  const GridFunction rhs = op3.apply(v);
  CHECK((lhs.values() - rhs.values()).cwiseAbs().maxCoeff() <
        1e-9 * rhs.values().cwiseAbs().maxCoeff());
}

TEST_CASE("symbol approaches the full difference operator as s approaches 1") {
  const EigenBasis b = build_basis({1, {1.0}, {10}});
  FracOperator op(b, 0.999);
  for (int k = 0; k < b.size(); ++k) {
    const double lam = b.eigenvalues[k];
    CHECK(std::abs(op.symbol(k) - lam) < 1e-2 * lam);
  }
}

TEST_CASE("identity limit as s approaches 0 on the normalized spectrum") {
  const EigenBasis b = build_basis({1, {1.0}, {10}});
  FracOperator op(b, 1e-6);
  for (int k = 0; k < b.size(); ++k)
    CHECK(op.symbol(k) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("fractional powers keep nonpositive off-diagonal entries") {
  for (const DomainSpec dom :
       {DomainSpec{1, {1.0}, {16}}, DomainSpec{2, {1.0, 1.0}, {7, 7}}}) {
    const EigenBasis b = build_basis(dom);
    for (double s : {0.1, 0.25, 0.5, 0.75, 0.9}) {
      FracOperator op(b, s);
      const SignStructureReport rep = sign_structure_report(op, 50, 1234);
      const double tol = (dom.dim == 1) ? 1e-12 : 1e-12 * rep.norm_inf;
      CHECK(rep.max_offdiag <= tol);
      CHECK(rep.min_diag > 0.0);
      CHECK(rep.pairing_violations == 0);
      CHECK(rep.worst_pairing <= 1e-10);
    }
  }
}

TEST_CASE("inverse is entrywise nonnegative") {
  const EigenBasis b = build_basis({1, {1.0}, {16}});
  for (double s : {0.25, 0.5, 0.75}) {
    FracOperator op(b, s);
    for (int j = 0; j < b.size(); ++j) {
      Vector e = Vector::Zero(b.size());
      e[j] = 1.0;
      const GridFunction col = op.solve(GridFunction(b.domain, e));
      CHECK(col.values().minCoeff() >= -1e-12);
    }
  }
}

TEST_CASE("monotone inverse: larger force, larger unconstrained solution") {
  const EigenBasis b = build_basis({1, {1.0}, {16}});
  FracOperator op(b, 0.5);
  Rng rng(31);
  const GridFunction f(b.domain, rng.normal_vector(b.size()));
  Vector add(b.size());
  for (int i = 0; i < b.size(); ++i) add[i] = std::abs(rng.normal());
  const GridFunction g(b.domain, f.values() + add);
  const Vector gap = op.solve(g).values() - op.solve(f).values();
  CHECK(gap.minCoeff() >= -1e-12);
}

TEST_CASE("graph norm of the pure power ignores the shift") {
  const EigenBasis b = build_basis({1, {1.0}, {12}});
  Rng rng(41);
  const GridFunction v(b.domain, rng.normal_vector(b.size()));
  const double s = 0.5;
  FracOperator pure(b, s, 0.0);
  const double direct = l2_norm(b, pure.apply(v));
  CHECK(x0_norm(b, s, v) == doctest::Approx(direct).epsilon(1e-12));

  const Vector c = to_spectral(b, v);
  double acc = 0.0;
  for (int k = 0; k < b.size(); ++k)
    acc += std::pow(b.eigenvalues[k], 2.0 * s) * c[k] * c[k];
  CHECK(x0_norm(b, s, v) == doctest::Approx(std::sqrt(acc)).epsilon(1e-12));
}

TEST_CASE("dense cap guards the quadratic-memory path") {
  const EigenBasis b = build_basis({1, {1.0}, {32}});
  FracOperator op(b, 0.5, 0.0, 16);
  CHECK_THROWS_AS(op.dense(), std::length_error);
  // spectral application still works above the cap
  Rng rng(2);
  const GridFunction v(b.domain, rng.normal_vector(b.size()));
  CHECK(op.apply(v).size() == 32);
}

TEST_CASE("operator rejects parameters outside the fractional range") {
  const EigenBasis b = build_basis({1, {1.0}, {8}});
  CHECK_THROWS_AS(FracOperator(b, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(FracOperator(b, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(FracOperator(b, 0.5, -1.0), std::invalid_argument);
}
