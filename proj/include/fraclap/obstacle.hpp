#pragma once

#include <cstdint>
#include <vector>

#include "fraclap/frac_operator.hpp"

namespace fraclap {

struct SolverConfig {
  double omega = 1.5;          // projected SOR relaxation, (0,2)
  double tol = 1e-10;          // successive-iterate sup-norm change
  int max_iter = 100000;
  double act_tol = 1e-8;       // active-set classification u - psi <= act_tol
  double residual_tol = 1e-7;  // acceptance threshold on KKT residuals
  int oracle_cap = 512;        // largest grid the direct active-set path accepts
  int trials = 64;             // sample count for randomized checks
  std::uint64_t seed = 0;

  void validate() const;
};

/// Data of the constrained problem: find u >= obstacle with
/// A u - force >= 0 and (A u - force)(u - obstacle) = 0 pointwise.
struct ObstacleProblem {
  ObstacleProblem(const FracOperator& op, GridFunction force, GridFunction obstacle);

  const FracOperator& op;
  GridFunction force;
  GridFunction obstacle;
};

enum class ViSolver { psor, active_set };

struct ViResiduals {
  double feasibility = 0.0;       // min(u - psi), >= -tol
  double dual_feasibility = 0.0;  // min(Au - f), >= -tol
  double complementarity = 0.0;   // max |(Au - f)(u - psi)|
  double bound_upper = 0.0;       // max(Au - max(f, A psi)), <= tol
};

struct VISolution {
  GridFunction u;
  GridFunction au;                  // spectral application of A to u
  std::vector<std::uint8_t> active; // 1 where u - psi <= act_tol
  ViResiduals residuals;
  int iterations = 0;
  ViSolver solver = ViSolver::psor;
  bool converged = true;
};

/// Projected SOR on the dense form. Starts from max(obstacle, A^{-1} f)
/// unless an initial iterate is supplied.
VISolution solve_vi_psor(const ObstacleProblem& prob, const SolverConfig& cfg,
                         const GridFunction* initial = nullptr);

/// Primal-dual active-set solve; exact complementarity up to linear-solve
/// roundoff. Rejects grids above cfg.oracle_cap; throws on set cycling.
VISolution solve_vi_active_set(const ObstacleProblem& prob, const SolverConfig& cfg);

/// Componentwise two-sided bound f - tol <= A u <= max(f, A psi) + tol.
struct BoundReport {
  double min_lower_margin = 0.0;  // min(Au - f)
  double min_upper_margin = 0.0;  // min(max(f, A psi) - Au)
  int violations = 0;
  double tol = 0.0;
};

BoundReport verify_lewy_stampacchia(const VISolution& sol, const ObstacleProblem& prob,
                                    double tol = 1e-7);

/// Sampled optimality characterizations of the solution. All margins are
/// signed and should be >= -tol:
///   energy: min over sampled feasible v of J(v) - J(u)
///   vi:     min over sampled feasible v of <Au - f, v - u>
///   dual:   min(Au - f) entrywise
///   pairing: -|<Au - f, u - psi>|
///   dual_cone: min over sampled v with Av >= f of <Au - A psi, v - u>
///   sandwich:  same pairing over sampled v with f <= Av <= max(f, A psi)
struct ConditionsReport {
  double energy = 0.0;
  double vi = 0.0;
  double dual = 0.0;
  double pairing = 0.0;
  double dual_cone = 0.0;
  double sandwich = 0.0;
  int samples = 0;

  double worst() const;
};

ConditionsReport check_equivalent_conditions(const VISolution& sol, const ObstacleProblem& prob,
                                             int samples, std::uint64_t seed);

/// Solves both problems and checks u1 <= u2 + tol given ordered data
/// f1 <= f2, psi1 <= psi2 (rejected otherwise).
struct OrderingReport {
  double min_gap = 0.0;  // min(u2 - u1)
  int violations = 0;
  VISolution first;
  VISolution second;
};

OrderingReport compare_solutions(const ObstacleProblem& p1, const ObstacleProblem& p2,
                                 const SolverConfig& cfg, double tol = 1e-8);

/// Randomized checks of the positive-part inequalities
///   ||[mu + zeta]_+|| <= ||[mu]_+|| + ||[zeta]_+||   (discrete L2)
///   gagliardo_sq([v]_+) <= gagliardo_sq(v)
struct PositivePartReport {
  double worst_l2_margin = 0.0;        // min over trials of rhs - lhs
  double worst_seminorm_margin = 0.0;
  int l2_violations = 0;
  int seminorm_violations = 0;
  int trials = 0;
};

PositivePartReport positive_part_lemmas_check(const EigenBasis& basis, double s, int trials,
                                              std::uint64_t seed, double tol = 1e-10);

}  // namespace fraclap
