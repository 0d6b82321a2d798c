#include "fraclap/frac_operator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fraclap/rng.hpp"

namespace fraclap {

FracOperator::FracOperator(const EigenBasis& basis, double s, double shift, int dense_cap)
    : basis_(&basis), s_(s), shift_(shift), dense_cap_(dense_cap) {
  if (!(s > 0.0) || !(s < 1.0))
    throw std::invalid_argument("operator: s must lie in (0,1), got " + std::to_string(s));
  if (!(shift >= 0.0) || !std::isfinite(shift))
    throw std::invalid_argument("operator: shift must be finite and >= 0");
}

double FracOperator::symbol(int k) const {
  return std::pow(basis_->eigenvalues[k], s_) + shift_;
}

GridFunction FracOperator::apply(const GridFunction& v) const {
  Vector coeffs = to_spectral(*basis_, v);
  for (int k = 0; k < basis_->size(); ++k) coeffs[k] *= symbol(k);
  return from_spectral(*basis_, coeffs);
}

GridFunction FracOperator::solve(const GridFunction& f) const {
  Vector coeffs = to_spectral(*basis_, f);
  for (int k = 0; k < basis_->size(); ++k) coeffs[k] /= symbol(k);
  return from_spectral(*basis_, coeffs);
}

const Matrix& FracOperator::dense() const {
  std::call_once(dense_once_, [this] {
    const int n = basis_->size();
    if (n > dense_cap_)
      throw std::length_error("operator: dense assembly capped at " +
                              std::to_string(dense_cap_) + " nodes, grid has " +
                              std::to_string(n));
    Vector d(n);
    for (int k = 0; k < n; ++k) d[k] = symbol(k);
    const Matrix& phi = basis_->eigenvectors;
    Matrix a = phi * d.asDiagonal() * (basis_->weight * phi.transpose());
    dense_ = 0.5 * (a + a.transpose());
  });
  return dense_;
}

double FracOperator::energy_inner(const GridFunction& v, const GridFunction& w) const {
  return l2_inner(*basis_, apply(v), w);
}

double x0_norm(const EigenBasis& basis, double s, const GridFunction& v) {
  const Vector coeffs = to_spectral(basis, v);
  double acc = 0.0;
  for (int k = 0; k < basis.size(); ++k)
    acc += std::pow(basis.eigenvalues[k], 2.0 * s) * coeffs[k] * coeffs[k];
  return std::sqrt(acc);
}

GridFunction random_smooth(const EigenBasis& basis, Rng& rng, double amplitude, double decay) {
  const int n = basis.size();
  Vector coeffs(n);
  const double lam1 = basis.eigenvalues[0];
  for (int k = 0; k < n; ++k)
    coeffs[k] = rng.normal() * std::pow(lam1 / basis.eigenvalues[k], decay);
  GridFunction v = from_spectral(basis, coeffs);
  const double m = v.values().cwiseAbs().maxCoeff();
  if (m == 0.0) return v;
  return GridFunction(basis.domain, (amplitude / m) * v.values());
}

SignStructureReport sign_structure_report(const FracOperator& op, int trials,
                                          std::uint64_t seed, double pairing_tol) {
  SignStructureReport rep;
  rep.trials = trials;
  const Matrix& a = op.dense();
  const int n = static_cast<int>(a.rows());

  rep.norm_inf = a.cwiseAbs().rowwise().sum().maxCoeff();
  rep.min_diag = a.diagonal().minCoeff();
  double off = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) off = std::max(off, a(i, j));
  rep.max_offdiag = off;

  Rng rng(seed);
  const EigenBasis& basis = op.basis();
  rep.worst_pairing = -std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    GridFunction v(basis.domain, rng.normal_vector(n));
    const double pairing = l2_inner(basis, op.apply(positive_part(v)), negative_part(v));
    rep.worst_pairing = std::max(rep.worst_pairing, pairing);
    if (pairing > pairing_tol) ++rep.pairing_violations;
  }
  return rep;
}

}  // namespace fraclap
