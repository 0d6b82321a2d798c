#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fraclap/obstacle.hpp"

namespace fraclap {

/// Partition 0 = t_0 < t_1 < ... < t_m = T.
struct TimeGrid {
  std::vector<double> t;

  static TimeGrid uniform(double t_end, int steps);
  void validate() const;
  int steps() const { return static_cast<int>(t.size()) - 1; }
  double tau(int k) const { return t[k] - t[k - 1]; }  // k in 1..steps()
  double tau_max() const;
  double horizon() const { return t.back(); }
};

/// Time-dependent source, either constant in time, piecewise-linear between
/// samples, or a callable evaluated on an internal per-step subdivision.
class TimeSource {
 public:
  static TimeSource constant(GridFunction f);
  static TimeSource sampled(std::vector<double> times, std::vector<GridFunction> values);
  static TimeSource callable(std::function<GridFunction(double)> fn, double sample_dt);

  GridFunction at(double t) const;
  bool is_constant() const { return kind_ == Kind::constant_in_time; }
  const DomainSpec& domain() const;

  /// Per-step averages f_k = (1/tau_k) int_{t_{k-1}}^{t_k} f dt by trapezoid
  /// quadrature. Sampled sources must cover [0,T] at least as finely as the
  /// step grid; a coarser sampling mesh is rejected.
  std::vector<GridFunction> average(const TimeGrid& grid) const;

 private:
  enum class Kind { constant_in_time, sampled, callable };
  Kind kind_ = Kind::constant_in_time;
  std::vector<double> times_;
  std::vector<GridFunction> values_;
  std::function<GridFunction(double)> fn_;
  double sample_dt_ = 0.0;
};

std::vector<GridFunction> average_source(const TimeSource& source, const TimeGrid& grid);

/// One implicit Euler step of du/dt = [-(-Delta)^s u + f]_+ : the obstacle
/// problem with operator (-Delta)^s + 1/tau, force f_k + u_prev/tau and
/// obstacle u_prev. Returns the new state and the step residual
///   g = (u - u_prev)/tau + (-Delta)^s u - f_k  (the positive-part defect).
struct StepResult {
  GridFunction u;
  GridFunction g;
  double monotone_margin = 0.0;   // min(u - u_prev)
  double g_min = 0.0;             // min g
  double pairing = 0.0;           // <g, u - u_prev>, vanishes at the solution
  double euler_residual = 0.0;    // ||(u-u_prev)/tau - [-(-Delta)^s u + f]_+||_inf
  double bound_margin = 0.0;      // min([(-Delta)^s u_prev - f]_+ - g)
  int vi_iterations = 0;
};

StepResult euler_step(const GridFunction& u_prev, const GridFunction& f_k, double tau,
                      const FracOperator& op_s, const SolverConfig& cfg,
                      const FracOperator* op_shifted = nullptr);

struct EvolveConfig {
  SolverConfig vi;
  double law_tol = 1e-6;  // hard sanity bound on the per-step laws
  std::optional<GridFunction> force_limit;  // optional stationary majorant f*
};

struct EvolutionState {
  TimeGrid grid;
  double s = 0.0;
  std::vector<GridFunction> snapshots;     // u_0 .. u_m
  std::vector<GridFunction> step_sources;  // f_1 .. f_m
  std::vector<GridFunction> defects;       // g_1 .. g_m
  std::vector<double> hs_energy_sq;        // ||u_k||_{H^s}^2, size m+1
  std::vector<double> rate_l2_sq;          // ||(u_k - u_{k-1})/tau_k||_{L2}^2

  // per-step margins, size m
  std::vector<double> monotone_margin, g_min, pairing, euler_residual, bound_margin;
  std::vector<double> energy_slack;        // prefix slack of the energy bound
  double force_limit_margin = 0.0;         // min(f* - f_k), 0 when unused

  double worst_monotone() const;
  double worst_g_min() const;
  double worst_pairing() const;
  double worst_euler_residual() const;
  double worst_bound_margin() const;
  double worst_energy_slack() const;
};

/// Requires op_s.shift() == 0; steps the scheme over the whole grid.
/// Inner solver failures carry the step index.
EvolutionState evolve(const GridFunction& u0, const TimeSource& f, const TimeGrid& grid,
                      const FracOperator& op_s, const EvolveConfig& cfg);

/// Discrete analogue of the two-run energy stability estimate:
///   sum_k tau_k ||rate1_k - rate2_k||^2 + max_k ||u1_k - u2_k||_{H^s}^2
///     <= 2 (||u1_0 - u2_0||_{H^s}^2 + sum_k tau_k ||f1_k - f2_k||^2) .
struct StabilityReport {
  double lhs_sq = 0.0;
  double rhs_sq = 0.0;  // includes the factor 2
  double ratio = 0.0;
  bool pass = false;
};

StabilityReport stability_check(const EvolutionState& run1, const EvolutionState& run2,
                                const FracOperator& op_s, double tol = 1e-6);

/// Midpoint polarization identity (exact) and the O(tau) defect of the
/// endpoint form of d/dt ||u||_{H^s}^2 = 2 <rate, (-Delta)^s u>.
struct ChainRuleReport {
  double max_polarization_dev = 0.0;  // roundoff-level by construction
  double max_endpoint_dev = 0.0;      // max_k |Delta hs^2 / tau - 2<rate, A u_k>|
  double tau_max = 0.0;
  double c_run = 0.0;                 // max_endpoint_dev / tau_max
};

ChainRuleReport chain_rule_check(const EvolutionState& run, const FracOperator& op_s);

/// Runs both inputs and checks u1_k <= u2_k + tol at every step; data must
/// be ordered (u01 <= u02, f1 <= f2 stepwise after averaging).
struct EvolutionOrderingReport {
  double min_gap = 0.0;
  int violations = 0;
};

EvolutionOrderingReport comparison_evolution(const GridFunction& u01, const TimeSource& f1,
                                             const GridFunction& u02, const TimeSource& f2,
                                             const TimeGrid& grid, const FracOperator& op_s,
                                             const EvolveConfig& cfg, double tol = 1e-7);

/// Constant-force long-time run against the stationary constrained solution
/// with obstacle u0. Stops once ||u_k - u_{k-1}||_inf / tau < stop_tol.
struct AsymptoticReport {
  bool stationary = false;   // stop tolerance reached before the horizon
  double stop_time = 0.0;
  int steps_taken = 0;
  double hs_error = 0.0;       // ||u_final - u_inf||_{H^s}
  double above_initial = 0.0;  // min(u_final - u0)
  double dual_margin = 0.0;    // min((-Delta)^s u_final - f)
  EvolutionState run;
  VISolution limit;
};

struct AsymptoticConfig {
  double stop_tol = 1e-8;
  SolverConfig vi;
};

AsymptoticReport asymptotic_limit(const GridFunction& u0, const GridFunction& f_inf,
                                  const FracOperator& op_s, double horizon, double step,
                                  const AsymptoticConfig& cfg);

/// Gap between the piecewise-linear and piecewise-constant time interpolants,
/// bounded by sqrt(tau) times the energy constant of the run itself.
struct InterpolantReport {
  double c_energy = 0.0;   // sqrt(||u0||_{H^s}^2 + sum tau ||f_k||^2)
  double max_gap = 0.0;    // max_k ||u_k - u_{k-1}||_{L2}
  double envelope = 0.0;   // c_energy * sqrt(tau_max)
  bool pass = false;
};

InterpolantReport interpolant_gap_check(const EvolutionState& run, const FracOperator& op_s);

/// Max L2 distance between two runs of the same problem at shared times
/// (the coarse grid's times must appear in the fine grid).
double two_grid_gap(const EvolutionState& coarse, const EvolutionState& fine,
                    const FracOperator& op_s);

}  // namespace fraclap
