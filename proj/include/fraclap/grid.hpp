#pragma once

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace fraclap {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Axis-aligned box (0,L1) or (0,L1)x(0,L2) with a uniform grid of interior
/// nodes per axis. Boundary nodes carry homogeneous Dirichlet data and are
/// not stored.
struct DomainSpec {
  int dim = 1;
  std::vector<double> lengths;
  std::vector<int> n_cells;  // interior nodes per axis, each >= 2

  /// Throws std::invalid_argument on inconsistent or degenerate data.
  void validate() const;

  int total_nodes() const;
  double spacing(int axis) const;  // L/(n+1)
  double cell_volume() const;      // product of spacings

  bool operator==(const DomainSpec& other) const;
};

/// Nodal values on the interior grid, lexicographic with axis 0 fastest.
/// Immutable after construction; non-finite entries are rejected.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(DomainSpec domain, Vector values);

  const DomainSpec& domain() const { return domain_; }
  const Vector& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }

  static GridFunction zero(const DomainSpec& domain);
  static GridFunction constant(const DomainSpec& domain, double c);

 private:
  DomainSpec domain_;
  Vector values_;
};

/// Coordinates of interior node j (lexicographic index).
std::array<double, 2> node_coords(const DomainSpec& domain, int j);

/// Distance from node j to the boundary of the box.
double boundary_distance(const DomainSpec& domain, int j);

/// Eigenpairs of the finite-difference Dirichlet Laplacian on the grid.
/// eigenvalues are ascending (stable tie order from the lexicographic mode
/// sweep); eigenvector columns are orthonormal in the discrete L2 product,
/// Phi^T (h I) Phi = I with h the cell volume.
struct EigenBasis {
  DomainSpec domain;
  Vector eigenvalues;
  Matrix eigenvectors;
  double weight = 0.0;  // cell volume h

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Closed-form sine eigenbasis; 2D bases are tensor products of the 1D ones.
EigenBasis build_basis(const DomainSpec& domain);

/// Coefficients v_k = h * phi_k . v of the expansion v = sum_k v_k phi_k.
Vector to_spectral(const EigenBasis& basis, const GridFunction& v);
GridFunction from_spectral(const EigenBasis& basis, const Vector& coeffs);

/// Discrete L2 pairing h * v . w.
double l2_inner(const EigenBasis& basis, const GridFunction& v, const GridFunction& w);
double l2_norm(const EigenBasis& basis, const GridFunction& v);

/// Spectral norm of order s: hs_norm^2 = sum_k lambda_k^s v_k^2.
double hs_norm(const EigenBasis& basis, double s, const GridFunction& v);

/// Squared Gagliardo double sum over the closed grid (zero boundary nodes
/// included, diagonal pairs excluded), uniform weight h^2 per pair:
///   h^2 sum_{i != j} (v_i - v_j)^2 / |x_i - x_j|^{n + 2s}.
/// Diagnostic companion to hs_norm; the two are equivalent only up to
/// grid-dependent constants.
double gagliardo_sq(const EigenBasis& basis, double s, const GridFunction& v);

/// Weighted boundary-mass diagnostic h * sum_j v_j^2 / dist(x_j, boundary).
double lions_magenes_functional(const EigenBasis& basis, const GridFunction& v);

GridFunction positive_part(const GridFunction& v);
GridFunction negative_part(const GridFunction& v);  // max(-v, 0)

}  // namespace fraclap
