#include <doctest.h>

#include <cmath>

#include "fraclap/grid.hpp"
#include "fraclap/rng.hpp"

using namespace fraclap;

namespace {

// Assembled second-difference matrix, the reference the closed forms must
// reproduce.
Matrix fd_laplacian(const DomainSpec& dom) {
  const int n = dom.total_nodes();
  Matrix a = Matrix::Zero(n, n);
  if (dom.dim == 1) {
    const double h = dom.spacing(0);
    for (int i = 0; i < n; ++i) {
      a(i, i) = 2.0 / (h * h);
      if (i > 0) a(i, i - 1) = -1.0 / (h * h);
      if (i + 1 < n) a(i, i + 1) = -1.0 / (h * h);
    }
    return a;
  }
  const int nx = dom.n_cells[0], ny = dom.n_cells[1];
  const double hx = dom.spacing(0), hy = dom.spacing(1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int p = j * nx + i;
      a(p, p) = 2.0 / (hx * hx) + 2.0 / (hy * hy);
      if (i > 0) a(p, p - 1) = -1.0 / (hx * hx);
      if (i + 1 < nx) a(p, p + 1) = -1.0 / (hx * hx);
      if (j > 0) a(p, p - nx) = -1.0 / (hy * hy);
      if (j + 1 < ny) a(p, p + nx) = -1.0 / (hy * hy);
    }
  return a;
}

}  // namespace

TEST_CASE("smallest eigenvalue on the unit interval with three nodes") {
  const EigenBasis b = build_basis({1, {1.0}, {3}});
  // h = 1/4, lambda_1 = 2/h^2 (1 - cos(pi/4)) = 32 - 16 sqrt(2)
  CHECK(b.eigenvalues[0] == doctest::Approx(32.0 - 16.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(b.eigenvalues[0] == doctest::Approx(9.372583002030478).epsilon(1e-14));
}

TEST_CASE("eigenpairs satisfy the assembled difference operator") {
  for (const DomainSpec dom : {DomainSpec{1, {1.0}, {17}}, DomainSpec{1, {2.5}, {9}},
                               DomainSpec{2, {1.0, 1.5}, {6, 4}}}) {
    const EigenBasis b = build_basis(dom);
    const Matrix a = fd_laplacian(dom);
    const Matrix residual = a * b.eigenvectors - b.eigenvectors * b.eigenvalues.asDiagonal();
    CHECK(residual.cwiseAbs().maxCoeff() < 1e-9 * b.eigenvalues.maxCoeff());

    // ascending eigenvalues
    for (int k = 1; k < b.size(); ++k) CHECK(b.eigenvalues[k] >= b.eigenvalues[k - 1]);
  }
}

TEST_CASE("eigenvectors are orthonormal in the weighted product") {
  for (const DomainSpec dom :
       {DomainSpec{1, {1.0}, {12}}, DomainSpec{2, {1.0, 1.0}, {5, 7}}}) {
    const EigenBasis b = build_basis(dom);
    const Matrix gram = b.weight * b.eigenvectors.transpose() * b.eigenvectors;
    CHECK((gram - Matrix::Identity(b.size(), b.size())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("spectral transform round trip and Parseval") {
  const EigenBasis b = build_basis({2, {1.0, 2.0}, {7, 5}});
  Rng rng(11);
  const GridFunction v(b.domain, rng.normal_vector(b.size()));
  const Vector c = to_spectral(b, v);
  const GridFunction back = from_spectral(b, c);
  CHECK((back.values() - v.values()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(l2_inner(b, v, v) == doctest::Approx(c.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("spectral norm is monotone in the order for a normalized datum") {
  const EigenBasis b = build_basis({1, {1.0}, {24}});
  Rng rng(3);
  GridFunction v = random_smooth(b, rng, 1.0);
  // normalize so every eigenvalue weight exceeds 1 on the fd spectrum
  double prev = hs_norm(b, 0.1, v);
  for (double s : {0.3, 0.5, 0.7, 0.9}) {
    const double cur = hs_norm(b, s, v);
    // lambda_1 > pi^2 > 1 on the unit interval, so the norm grows with s
    CHECK(cur > prev * (1.0 - 1e-12));
    prev = cur;
  }
}

TEST_CASE("double-sum seminorm of a constant is positive through the boundary") {
  const EigenBasis b = build_basis({1, {1.0}, {15}});
  const GridFunction one = GridFunction::constant(b.domain, 1.0);
  CHECK(gagliardo_sq(b, 0.5, one) > 0.0);
}

TEST_CASE("double-sum seminorm brackets between pencil bounds") {
  // two interior nodes at 1/3 and 2/3 with values a and b: every pair term is
  // explicit, including the four boundary pairs
  const DomainSpec dom{1, {1.0}, {2}};
  const EigenBasis basis = build_basis(dom);
  const double s = 0.4;
  const double va = 0.7, vb = -0.2;
  const GridFunction v(dom, (Vector(2) << va, vb).finished());
  const double h = 1.0 / 3.0;
  const double p = 1.0 + 2.0 * s;
  double acc = 0.0;
  acc += 2.0 * (va - vb) * (va - vb) / std::pow(h, p);
  acc += 2.0 * va * va / std::pow(h, p);        // against the left boundary node
  acc += 2.0 * va * va / std::pow(2 * h, p);    // against the right boundary node
  acc += 2.0 * vb * vb / std::pow(2 * h, p);
  acc += 2.0 * vb * vb / std::pow(h, p);
  CHECK(gagliardo_sq(basis, s, v) == doctest::Approx(h * h * acc).epsilon(1e-13));
}

TEST_CASE("boundary-weighted mass of the unit function on small grids") {
  // four nodes: h = 1/5, distances to the boundary are 1/5, 2/5, 2/5, 1/5
  const EigenBasis b4 = build_basis({1, {1.0}, {4}});
  const GridFunction one4 = GridFunction::constant(b4.domain, 1.0);
  const double expected4 = (1.0 / 5.0) * (5.0 + 5.0 / 2.0 + 5.0 / 2.0 + 5.0);
  CHECK(lions_magenes_functional(b4, one4) == doctest::Approx(expected4).epsilon(1e-14));

  // three nodes: h = 1/4, distances 1/4, 1/2, 1/4, so the sum is (1/4)(4+2+4)
  const EigenBasis b3 = build_basis({1, {1.0}, {3}});
  const GridFunction one3 = GridFunction::constant(b3.domain, 1.0);
  CHECK(lions_magenes_functional(b3, one3) == doctest::Approx(2.5).epsilon(1e-14));
}

TEST_CASE("boundary-weighted mass penalizes edge spikes over smooth bumps") {
  const EigenBasis b = build_basis({1, {1.0}, {31}});
  const GridFunction phi1(b.domain, b.eigenvectors.col(0));
  Vector spike = Vector::Zero(b.size());
  spike[0] = phi1.values().cwiseAbs().maxCoeff();
  const GridFunction edge(b.domain, spike);
  const double smooth = lions_magenes_functional(b, phi1) / l2_norm(b, phi1);
  const double spiky = lions_magenes_functional(b, edge) / l2_norm(b, edge);
  CHECK(spiky > smooth);
}

TEST_CASE("node coordinates and boundary distance") {
  const DomainSpec dom{2, {1.0, 2.0}, {4, 3}};
  const auto xy = node_coords(dom, 0);
  CHECK(xy[0] == doctest::Approx(0.2));
  CHECK(xy[1] == doctest::Approx(0.5));
  // node (i,j) = (1,2): x = 0.4, y = 1.5, distance min(0.4, 0.6, 1.5, 0.5)
  const int idx = 2 * 4 + 1;
  CHECK(boundary_distance(dom, idx) == doctest::Approx(0.4));
}

TEST_CASE("domain validation rejects degenerate input") {
  CHECK_THROWS_AS((DomainSpec{0, {}, {}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DomainSpec{1, {-1.0}, {4}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DomainSpec{1, {1.0}, {1}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DomainSpec{2, {1.0}, {4, 4}}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((DomainSpec{3, {1.0, 1.0, 1.0}, {4, 4, 4}}.validate()),
                  std::invalid_argument);
}

TEST_CASE("grid functions reject non-finite values and wrong sizes") {
  const DomainSpec dom{1, {1.0}, {4}};
  Vector bad(4);
  bad << 1.0, 2.0, std::nan(""), 0.0;
  CHECK_THROWS_AS(GridFunction(dom, bad), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(dom, Vector::Zero(5)), std::invalid_argument);
}

TEST_CASE("positive and negative parts decompose the function") {
  const DomainSpec dom{1, {1.0}, {5}};
  Rng rng(7);
  const GridFunction v(dom, rng.normal_vector(5));
  const GridFunction p = positive_part(v), m = negative_part(v);
  CHECK((p.values() - m.values() - v.values()).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(p.values().minCoeff() >= 0.0);
  CHECK(m.values().minCoeff() >= 0.0);
  CHECK(p.values().cwiseProduct(m.values()).cwiseAbs().maxCoeff() < 1e-15);
}
