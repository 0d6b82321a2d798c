#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "fraclap/extension.hpp"
#include "fraclap/rng.hpp"

using namespace fraclap;

TEST_CASE("half-integer order reduces to the unweighted problem with a sinh profile") {
  const EigenBasis b = build_basis({1, {1.0}, {32}});
  const double y_top = default_height(b);
  const ExtensionMesh mesh = make_extension_mesh(b, 0.5, 128, y_top);
  const GridFunction phi1(b.domain, b.eigenvectors.col(0));
  const ExtensionSolution sol = solve_extension(mesh, phi1);

  const double lam = b.eigenvalues[0];
  const double exact = std::sqrt(lam) / std::tanh(std::sqrt(lam) * y_top);
  CHECK(sol.mode_trace[0] == doctest::Approx(exact).epsilon(1e-2));
  CHECK(trace_constant(0.5) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("weighted flux reproduces the fractional operator across orders") {
  const EigenBasis b = build_basis({1, {1.0}, {32}});
  Rng rng(3);
  const GridFunction v = random_smooth(b, rng, 1.0);
  for (double s : {0.25, 0.5, 0.75}) {
    FracOperator op(b, s);
    const ExtensionMesh mesh = make_extension_mesh(b, s, 128, default_height(b));
    const ExtensionSolution sol = solve_extension(mesh, v);
    const TraceIdentityReport rep = verify_trace_identity(sol, op, v);
    CHECK(rep.rel_error < 0.05);
  }
}

TEST_CASE("trace error decreases along the refinement ladder") {
  const EigenBasis b = build_basis({1, {1.0}, {32}});
  const GridFunction phi1(b.domain, b.eigenvectors.col(0));
  for (double s : {0.25, 0.5, 0.75}) {
    const auto rows = extension_refinement_study(b, s, phi1, {32, 64, 128});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].mode_count == 1);
    for (size_t i = 1; i < rows.size(); ++i)
      CHECK(rows[i].trace_rel_error < rows[i - 1].trace_rel_error);
    CHECK(rows.back().trace_rel_error < 0.05);
    // the proportionality factor settles toward the trace normalization
    CHECK(std::abs(rows[2].energy_kappa - rows[1].energy_kappa) <=
          std::abs(rows[1].energy_kappa - rows[0].energy_kappa) + 1e-12);
    CHECK(rows.back().energy_kappa ==
          doctest::Approx(trace_constant(s)).epsilon(0.10));
  }
}

TEST_CASE("cylinder energy is proportional to the squared trace seminorm") {
  const EigenBasis b = build_basis({1, {1.0}, {24}});
  Rng rng(7);
  const double s = 0.6;
  const ExtensionMesh mesh = make_extension_mesh(b, s, 128, default_height(b));
  double kmin = 1e300, kmax = -1e300;
  for (int t = 0; t < 10; ++t) {
    const GridFunction v = random_smooth(b, rng, 1.0);
    const ExtensionSolution sol = solve_extension(mesh, v);
    const EnergyIdentityReport rep = verify_energy_identity(sol, mesh, v);
    kmin = std::min(kmin, rep.kappa);
    kmax = std::max(kmax, rep.kappa);
  }
  CHECK((kmax - kmin) / kmax < 0.02);
}

TEST_CASE("the solve minimizes the discrete energy over its boundary class") {
  const EigenBasis b = build_basis({1, {1.0}, {12}});
  Rng rng(11);
  const double s = 0.3;
  const ExtensionMesh mesh = make_extension_mesh(b, s, 32, default_height(b));
  const GridFunction v = random_smooth(b, rng, 1.0);
  const ExtensionSolution sol = solve_extension(mesh, v);

  const double base_energy = extension_energy(mesh, sol.v);
  CHECK(base_energy == doctest::Approx(sol.energy).epsilon(1e-10));

  const int m = mesh.levels();
  for (int t = 0; t < 20; ++t) {
    Matrix pert = sol.v;
    for (int i = 1; i < m; ++i)
      pert.col(i) += 0.05 * rng.normal_vector(b.size());
    CHECK(extension_energy(mesh, pert) > base_energy - 1e-12);
  }
}

TEST_CASE("mode-decoupled solve matches a direct discretization of the cylinder") {
  const DomainSpec dom{1, {1.0}, {8}};
  const EigenBasis b = build_basis(dom);
  const double s = 0.4;
  const int m = 16;
  const ExtensionMesh mesh = make_extension_mesh(b, s, m, default_height(b));
  Rng rng(13);
  const GridFunction v = random_smooth(b, rng, 1.0);
  const ExtensionSolution sol = solve_extension(mesh, v);

  // assemble the coupled system over interior cylinder nodes (j, i),
  // i = 1..m-1, with the same face conductances and dual masses
  const int n = dom.total_nodes();
  const double h = dom.spacing(0);
  std::vector<double> cond(m), mass(m + 1);
  const auto wint = [](double a, double bb, double p) {
    return (std::pow(bb, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
  };
  for (int i = 0; i < m; ++i) cond[i] = 1.0 / wint(mesh.y[i], mesh.y[i + 1], 2.0 * s - 1.0);
  for (int i = 0; i <= m; ++i) {
    const double lo = (i == 0) ? mesh.y[0] : 0.5 * (mesh.y[i - 1] + mesh.y[i]);
    const double hi = (i == m) ? mesh.y[m] : 0.5 * (mesh.y[i] + mesh.y[i + 1]);
    mass[i] = wint(lo, hi, 1.0 - 2.0 * s);
  }

  const int nn = n * (m - 1);
  Matrix a = Matrix::Zero(nn, nn);
  Vector rhs = Vector::Zero(nn);
  const auto idx = [&](int j, int i) { return (i - 1) * n + j; };
  for (int i = 1; i < m; ++i)
    for (int j = 0; j < n; ++j) {
      const int p = idx(j, i);
      a(p, p) += cond[i - 1] + cond[i] + mass[i] * 2.0 / (h * h);
      if (j > 0) a(p, idx(j - 1, i)) -= mass[i] / (h * h);
      if (j + 1 < n) a(p, idx(j + 1, i)) -= mass[i] / (h * h);
      if (i > 1) a(p, idx(j, i - 1)) -= cond[i - 1];
      if (i + 1 < m) a(p, idx(j, i + 1)) -= cond[i];
      if (i == 1) rhs[p] += cond[0] * v.values()[j];
    }
  const Vector sol_flat = a.ldlt().solve(rhs);

  for (int i = 1; i < m; ++i)
    for (int j = 0; j < n; ++j)
      CHECK(sol.v(j, i) == doctest::Approx(sol_flat[idx(j, i)]).epsilon(1e-6));
}

TEST_CASE("per-mode fluxes are positive and decay profiles are monotone") {
  const EigenBasis b = build_basis({1, {1.0}, {16}});
  const ExtensionMesh mesh = make_extension_mesh(b, 0.7, 64, default_height(b));
  const GridFunction phi1(b.domain, b.eigenvectors.col(0));
  const ExtensionSolution sol = solve_extension(mesh, phi1);
  for (int k = 0; k < b.size(); ++k) CHECK(sol.mode_trace[k] > 0.0);
}

TEST_CASE("mesh construction is validated and geometric") {
  const EigenBasis b = build_basis({1, {1.0}, {8}});
  CHECK_THROWS_AS(make_extension_mesh(b, 1.5, 32, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_extension_mesh(b, 0.5, 4, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_extension_mesh(b, 0.5, 32, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_extension_mesh(b, 0.5, 32, 1.0, 3.0), std::invalid_argument);

  const ExtensionMesh mesh = make_extension_mesh(b, 0.5, 32, 2.0, 1.2);
  CHECK(mesh.y.front() == 0.0);
  CHECK(mesh.y.back() == doctest::Approx(2.0).epsilon(1e-12));
  for (size_t i = 2; i < mesh.y.size(); ++i) {
    const double r = (mesh.y[i] - mesh.y[i - 1]) / (mesh.y[i - 1] - mesh.y[i - 2]);
    CHECK(r == doctest::Approx(1.2).epsilon(1e-8));
  }

  const EigenBasis other = build_basis({1, {1.0}, {9}});
  const ExtensionMesh ok = make_extension_mesh(b, 0.5, 32, 1.0);
  CHECK_THROWS_AS(solve_extension(ok, GridFunction::zero(other.domain)),
                  std::invalid_argument);
}
