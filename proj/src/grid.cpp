#include "fraclap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fraclap {

void DomainSpec::validate() const {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("domain: dim must be 1 or 2, got " + std::to_string(dim));
  if (static_cast<int>(lengths.size()) != dim)
    throw std::invalid_argument("domain: lengths must have one entry per axis");
  if (static_cast<int>(n_cells.size()) != dim)
    throw std::invalid_argument("domain: n_cells must have one entry per axis");
  for (int a = 0; a < dim; ++a) {
    if (!(lengths[a] > 0.0) || !std::isfinite(lengths[a]))
      throw std::invalid_argument("domain: lengths must be positive and finite");
    if (n_cells[a] < 2)
      throw std::invalid_argument("domain: need at least 2 interior nodes per axis, got " +
                                  std::to_string(n_cells[a]));
  }
}

int DomainSpec::total_nodes() const {
  int n = 1;
  for (int a = 0; a < dim; ++a) n *= n_cells[a];
  return n;
}

double DomainSpec::spacing(int axis) const { return lengths[axis] / (n_cells[axis] + 1); }

double DomainSpec::cell_volume() const {
  double h = 1.0;
  for (int a = 0; a < dim; ++a) h *= spacing(a);
  return h;
}

bool DomainSpec::operator==(const DomainSpec& other) const {
  return dim == other.dim && lengths == other.lengths && n_cells == other.n_cells;
}

GridFunction::GridFunction(DomainSpec domain, Vector values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  domain_.validate();
  if (values_.size() != domain_.total_nodes())
    throw std::invalid_argument("grid function: value count does not match the grid");
  if (!values_.allFinite())
    throw std::invalid_argument("grid function: non-finite entries");
}

GridFunction GridFunction::zero(const DomainSpec& domain) {
  return GridFunction(domain, Vector::Zero(domain.total_nodes()));
}

GridFunction GridFunction::constant(const DomainSpec& domain, double c) {
  return GridFunction(domain, Vector::Constant(domain.total_nodes(), c));
}

std::array<double, 2> node_coords(const DomainSpec& domain, int j) {
  std::array<double, 2> x{0.0, 0.0};
  if (domain.dim == 1) {
    x[0] = (j + 1) * domain.spacing(0);
  } else {
    const int n0 = domain.n_cells[0];
    x[0] = (j % n0 + 1) * domain.spacing(0);
    x[1] = (j / n0 + 1) * domain.spacing(1);
  }
  return x;
}

double boundary_distance(const DomainSpec& domain, int j) {
  const auto x = node_coords(domain, j);
  double d = std::min(x[0], domain.lengths[0] - x[0]);
  if (domain.dim == 2) d = std::min(d, std::min(x[1], domain.lengths[1] - x[1]));
  return d;
}

namespace {

// 1D factor: lambda_k = (2/h^2)(1 - cos(k pi / (n+1))),
// phi_k(x_j) = sqrt(2/L) sin(k pi (j+1) / (n+1)), already unit in the
// h-weighted product since h (n+1) = L.
void axis_eigenpairs(double length, int n, Vector& lam, Matrix& phi) {
  const double h = length / (n + 1);
  lam.resize(n);
  phi.resize(n, n);
  const double c = std::sqrt(2.0 / length);
  for (int k = 0; k < n; ++k) {
    const double t = (k + 1) * M_PI / (n + 1);
    lam[k] = 2.0 / (h * h) * (1.0 - std::cos(t));
    for (int j = 0; j < n; ++j) phi(j, k) = c * std::sin(t * (j + 1));
  }
}

}  // namespace

EigenBasis build_basis(const DomainSpec& domain) {
  domain.validate();
  EigenBasis basis;
  basis.domain = domain;
  basis.weight = domain.cell_volume();

  if (domain.dim == 1) {
    axis_eigenpairs(domain.lengths[0], domain.n_cells[0], basis.eigenvalues, basis.eigenvectors);
    return basis;
  }

  Vector lam0, lam1;
  Matrix phi0, phi1;
  axis_eigenpairs(domain.lengths[0], domain.n_cells[0], lam0, phi0);
  axis_eigenpairs(domain.lengths[1], domain.n_cells[1], lam1, phi1);

  const int n0 = domain.n_cells[0];
  const int n1 = domain.n_cells[1];
  const int n = n0 * n1;

  // Modes in lexicographic order (k0 fastest), then a stable sort by
  // eigenvalue so ties keep that order.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Vector lam_all(n);
  for (int m = 0; m < n; ++m) lam_all[m] = lam0[m % n0] + lam1[m / n0];
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lam_all[a] < lam_all[b]; });

  basis.eigenvalues.resize(n);
  basis.eigenvectors.resize(n, n);
  for (int c = 0; c < n; ++c) {
    const int m = order[c];
    const int k0 = m % n0;
    const int k1 = m / n0;
    basis.eigenvalues[c] = lam_all[m];
    for (int j = 0; j < n; ++j)
      basis.eigenvectors(j, c) = phi0(j % n0, k0) * phi1(j / n0, k1);
  }
  return basis;
}

namespace {

void require_same_domain(const EigenBasis& basis, const GridFunction& v) {
  if (!(basis.domain == v.domain()))
    throw std::invalid_argument("grid function does not live on the basis grid");
}

}  // namespace

Vector to_spectral(const EigenBasis& basis, const GridFunction& v) {
  require_same_domain(basis, v);
  return basis.weight * (basis.eigenvectors.transpose() * v.values());
}

GridFunction from_spectral(const EigenBasis& basis, const Vector& coeffs) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("coefficient count does not match the basis");
  return GridFunction(basis.domain, basis.eigenvectors * coeffs);
}

double l2_inner(const EigenBasis& basis, const GridFunction& v, const GridFunction& w) {
  require_same_domain(basis, v);
  require_same_domain(basis, w);
  return basis.weight * v.values().dot(w.values());
}

double l2_norm(const EigenBasis& basis, const GridFunction& v) {
  return std::sqrt(l2_inner(basis, v, v));
}

double hs_norm(const EigenBasis& basis, double s, const GridFunction& v) {
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("hs_norm: s must lie in (0,1)");
  const Vector coeffs = to_spectral(basis, v);
  double acc = 0.0;
  for (int k = 0; k < basis.size(); ++k)
    acc += std::pow(basis.eigenvalues[k], s) * coeffs[k] * coeffs[k];
  return std::sqrt(acc);
}

double gagliardo_sq(const EigenBasis& basis, double s, const GridFunction& v) {
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("gagliardo_sq: s must lie in (0,1)");
  require_same_domain(basis, v);
  const DomainSpec& dom = basis.domain;
  const int dim = dom.dim;

  // Closed grid: interior nodes plus the zero boundary nodes, so functions
  // that do not vanish near the boundary pick up their boundary contribution.
  std::vector<double> xs, ys, vals;
  const int n0 = dom.n_cells[0] + 2;
  const int n1 = (dim == 2) ? dom.n_cells[1] + 2 : 1;
  const double h0 = dom.spacing(0);
  const double h1 = (dim == 2) ? dom.spacing(1) : 0.0;
  for (int i1 = 0; i1 < n1; ++i1) {
    for (int i0 = 0; i0 < n0; ++i0) {
      const bool bdry = (i0 == 0 || i0 == n0 - 1 || (dim == 2 && (i1 == 0 || i1 == n1 - 1)));
      xs.push_back(i0 * h0);
      ys.push_back(i1 * h1);
      if (bdry) {
        vals.push_back(0.0);
      } else {
        const int j = (i0 - 1) + ((dim == 2) ? dom.n_cells[0] * (i1 - 1) : 0);
        vals.push_back(v.values()[j]);
      }
    }
  }

  const double p = dim + 2.0 * s;
  const int m = static_cast<int>(vals.size());
  double acc = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      const double d = vals[i] - vals[j];
      if (d == 0.0) continue;
      const double dx = xs[i] - xs[j];
      const double dy = ys[i] - ys[j];
      const double r = std::sqrt(dx * dx + dy * dy);
      acc += 2.0 * d * d / std::pow(r, p);
    }
  }
  const double h = dom.cell_volume();
  return h * h * acc;
}

double lions_magenes_functional(const EigenBasis& basis, const GridFunction& v) {
  require_same_domain(basis, v);
  double acc = 0.0;
  for (int j = 0; j < v.size(); ++j) {
    const double vj = v.values()[j];
    acc += vj * vj / boundary_distance(basis.domain, j);
  }
  return basis.weight * acc;
}

GridFunction positive_part(const GridFunction& v) {
  return GridFunction(v.domain(), v.values().cwiseMax(0.0));
}

GridFunction negative_part(const GridFunction& v) {
  return GridFunction(v.domain(), (-v.values()).cwiseMax(0.0));
}

}  // namespace fraclap
