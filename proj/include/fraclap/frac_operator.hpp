#pragma once

#include <cstdint>
#include <mutex>

#include "fraclap/grid.hpp"

namespace fraclap {

/// Spectral fractional Laplacian with an optional zero-order shift,
///   A v = sum_k (lambda_k^s + shift) v_k phi_k.
/// Holds a reference to the basis; apply/solve cost two dense mat-vecs.
/// Immutable after construction and safe to share across threads; the dense
/// form is assembled once behind a single-initialization guard.
class FracOperator {
 public:
  FracOperator(const EigenBasis& basis, double s, double shift = 0.0, int dense_cap = 4096);

  FracOperator(const FracOperator&) = delete;
  FracOperator& operator=(const FracOperator&) = delete;

  const EigenBasis& basis() const { return *basis_; }
  double s() const { return s_; }
  double shift() const { return shift_; }
  int size() const { return basis_->size(); }

  /// Symbol lambda_k^s + shift of mode k.
  double symbol(int k) const;

  GridFunction apply(const GridFunction& v) const;

  /// Inverse application; the operator is positive definite for shift >= 0.
  GridFunction solve(const GridFunction& f) const;

  /// Dense symmetric matrix Phi diag(lambda^s + shift) (h Phi^T), memoized.
  /// Throws std::length_error when the grid exceeds the dense cap.
  const Matrix& dense() const;

  /// Energy pairing <A v, w> = h (A v) . w.
  double energy_inner(const GridFunction& v, const GridFunction& w) const;

 private:
  const EigenBasis* basis_;
  double s_;
  double shift_;
  int dense_cap_;
  mutable std::once_flag dense_once_;
  mutable Matrix dense_;
};

/// || (-Delta)^s v ||_{L2} = sqrt(sum_k lambda_k^{2s} v_k^2); the shift plays
/// no part here.
double x0_norm(const EigenBasis& basis, double s, const GridFunction& v);

/// Sign structure of the dense matrix plus a randomized check of the
/// positive/negative-part pairing <A v_+, v_-> <= tol.
struct SignStructureReport {
  double max_offdiag = 0.0;   // most positive off-diagonal entry
  double min_diag = 0.0;
  double norm_inf = 0.0;
  double worst_pairing = 0.0; // max over trials of <A v_+, v_->
  int pairing_violations = 0;
  int trials = 0;
};

SignStructureReport sign_structure_report(const FracOperator& op, int trials,
                                          std::uint64_t seed, double pairing_tol = 1e-10);

}  // namespace fraclap
