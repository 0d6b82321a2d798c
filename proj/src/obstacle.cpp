#include "fraclap/obstacle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fraclap/rng.hpp"

namespace fraclap {

void SolverConfig::validate() const {
  if (!(omega > 0.0) || !(omega < 2.0))
    throw std::invalid_argument("solver: omega must lie in (0,2)");
  if (!(tol > 0.0)) throw std::invalid_argument("solver: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("solver: max_iter must be positive");
  if (!(act_tol > 0.0)) throw std::invalid_argument("solver: act_tol must be positive");
  if (oracle_cap < 1) throw std::invalid_argument("solver: oracle_cap must be positive");
  if (trials < 1) throw std::invalid_argument("solver: trials must be positive");
}

ObstacleProblem::ObstacleProblem(const FracOperator& op_, GridFunction force_,
                                 GridFunction obstacle_)
    : op(op_), force(std::move(force_)), obstacle(std::move(obstacle_)) {
  if (!(force.domain() == op.basis().domain) || !(obstacle.domain() == op.basis().domain))
    throw std::invalid_argument("obstacle problem: data does not live on the operator grid");
}

namespace {

VISolution finish_solution(const ObstacleProblem& prob, Vector u_vals, int iterations,
                           ViSolver which, bool converged, const SolverConfig& cfg) {
  VISolution sol;
  sol.u = GridFunction(prob.op.basis().domain, std::move(u_vals));
  sol.au = prob.op.apply(sol.u);
  sol.iterations = iterations;
  sol.solver = which;
  sol.converged = converged;

  const Vector& u = sol.u.values();
  const Vector& au = sol.au.values();
  const Vector& f = prob.force.values();
  const Vector& psi = prob.obstacle.values();
  const int n = static_cast<int>(u.size());

  const Vector apsi = prob.op.apply(prob.obstacle).values();
  sol.active.assign(n, 0);
  double feas = std::numeric_limits<double>::infinity();
  double dual = std::numeric_limits<double>::infinity();
  double comp = 0.0;
  double upper = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double gap = u[i] - psi[i];
    const double res = au[i] - f[i];
    if (gap <= cfg.act_tol) sol.active[i] = 1;
    feas = std::min(feas, gap);
    dual = std::min(dual, res);
    comp = std::max(comp, std::abs(res * gap));
    upper = std::min(upper, std::max(f[i], apsi[i]) - au[i]);
  }
  sol.residuals = {feas, dual, comp, -upper};
  return sol;
}

}  // namespace

VISolution solve_vi_psor(const ObstacleProblem& prob, const SolverConfig& cfg,
                         const GridFunction* initial) {
  cfg.validate();
  const Matrix& a = prob.op.dense();
  const int n = static_cast<int>(a.rows());
  const Vector& f = prob.force.values();
  const Vector& psi = prob.obstacle.values();

  Vector u;
  if (initial) {
    if (!(initial->domain() == prob.op.basis().domain))
      throw std::invalid_argument("psor: initial iterate does not live on the operator grid");
    u = initial->values().cwiseMax(psi);
  } else {
    u = prob.op.solve(prob.force).values().cwiseMax(psi);
  }

  // Accept once the sweep has stalled AND the optimality residuals are small;
  // the stall criterion alone can stop short of the residual target on stiff
  // problems, so keep sweeping until both hold.
  const Vector apsi = a * psi;
  const auto residuals_ok = [&]() {
    const Vector au = a * u;
    double dual = std::numeric_limits<double>::infinity();
    double comp = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double res = au[i] - f[i];
      dual = std::min(dual, res);
      comp = std::max(comp, std::abs(res * (u[i] - psi[i])));
      upper = std::min(upper, std::max(f[i], apsi[i]) - au[i]);
    }
    return dual >= -cfg.residual_tol && comp <= cfg.residual_tol &&
           upper >= -cfg.residual_tol;
  };

  int it = 0;
  bool converged = false;
  for (; it < cfg.max_iter; ++it) {
    double change = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = (f[i] - a.row(i).dot(u) + a(i, i) * u[i]) / a(i, i);
      const double cand = std::max(psi[i], (1.0 - cfg.omega) * u[i] + cfg.omega * z);
      change = std::max(change, std::abs(cand - u[i]));
      u[i] = cand;
    }
    if (change < cfg.tol && residuals_ok()) {
      converged = true;
      ++it;
      break;
    }
  }
  return finish_solution(prob, std::move(u), it, ViSolver::psor, converged, cfg);
}

VISolution solve_vi_active_set(const ObstacleProblem& prob, const SolverConfig& cfg) {
  cfg.validate();
  const int n = prob.op.size();
  if (n > cfg.oracle_cap)
    throw std::invalid_argument("active set: grid of " + std::to_string(n) +
                                " nodes exceeds oracle cap " + std::to_string(cfg.oracle_cap));
  const Matrix& a = prob.op.dense();
  const Vector& f = prob.force.values();
  const Vector& psi = prob.obstacle.values();

  // Start from the constraint violations of the unconstrained solve; then
  // iterate the primal-dual exchange until the set repeats.
  std::vector<std::uint8_t> active(n, 0);
  {
    const Vector u0 = prob.op.solve(prob.force).values();
    for (int i = 0; i < n; ++i) active[i] = (u0[i] < psi[i]) ? 1 : 0;
  }

  Vector u = Vector::Zero(n);
  int it = 0;
  for (; it <= n + 1; ++it) {
    std::vector<int> inactive;
    inactive.reserve(n);
    for (int i = 0; i < n; ++i)
      if (!active[i]) inactive.push_back(i);

    u = psi;
    const int m = static_cast<int>(inactive.size());
    if (m > 0) {
      Matrix aii(m, m);
      Vector rhs(m);
      for (int r = 0; r < m; ++r) {
        const int i = inactive[r];
        for (int c = 0; c < m; ++c) aii(r, c) = a(i, inactive[c]);
        double b = f[i];
        for (int j = 0; j < n; ++j)
          if (active[j]) b -= a(i, j) * psi[j];
        rhs[r] = b;
      }
      const Vector ui = aii.llt().solve(rhs);
      for (int r = 0; r < m; ++r) u[inactive[r]] = ui[r];
    }

    // Multiplier mu = Au - f vanishes on the inactive set by construction;
    // keep constrained nodes with positive mu, add nodes pushed below psi.
    std::vector<std::uint8_t> next(n, 0);
    bool changed = false;
    for (int i = 0; i < n; ++i) {
      if (active[i]) {
        const double mu = a.row(i).dot(u) - f[i];
        next[i] = (mu > 0.0) ? 1 : 0;
      } else {
        next[i] = (u[i] < psi[i]) ? 1 : 0;
      }
      changed = changed || (next[i] != active[i]);
    }
    if (!changed) break;
    active = next;
  }
  if (it > n + 1)
    throw std::runtime_error("active set: no fixed set after " + std::to_string(n + 1) +
                             " exchanges");
  return finish_solution(prob, std::move(u), it + 1, ViSolver::active_set, true, cfg);
}

BoundReport verify_lewy_stampacchia(const VISolution& sol, const ObstacleProblem& prob,
                                    double tol) {
  BoundReport rep;
  rep.tol = tol;
  const Vector& au = sol.au.values();
  const Vector& f = prob.force.values();
  const Vector apsi = prob.op.apply(prob.obstacle).values();
  const int n = static_cast<int>(au.size());

  double lower = std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double lo = au[i] - f[i];
    const double hi = std::max(f[i], apsi[i]) - au[i];
    lower = std::min(lower, lo);
    upper = std::min(upper, hi);
    if (lo < -tol || hi < -tol) ++rep.violations;
  }
  rep.min_lower_margin = lower;
  rep.min_upper_margin = upper;
  return rep;
}

double ConditionsReport::worst() const {
  double w = energy;
  w = std::min(w, vi);
  w = std::min(w, dual);
  w = std::min(w, pairing);
  w = std::min(w, dual_cone);
  w = std::min(w, sandwich);
  return w;
}

ConditionsReport check_equivalent_conditions(const VISolution& sol, const ObstacleProblem& prob,
                                             int samples, std::uint64_t seed) {
  ConditionsReport rep;
  rep.samples = samples;
  const EigenBasis& basis = prob.op.basis();
  const FracOperator& op = prob.op;
  Rng rng(seed);

  const GridFunction& u = sol.u;
  const GridFunction& f = prob.force;
  const GridFunction& psi = prob.obstacle;
  const GridFunction apsi = op.apply(psi);
  const GridFunction residual(basis.domain, sol.au.values() - f.values());

  const auto energy_of = [&](const GridFunction& v) {
    return 0.5 * op.energy_inner(v, v) - l2_inner(basis, f, v);
  };
  const double ju = energy_of(u);
  const double scale = 0.5 * (u.values().cwiseAbs().maxCoeff() +
                              psi.values().cwiseAbs().maxCoeff()) + 1.0;

  double energy = std::numeric_limits<double>::infinity();
  double vi = std::numeric_limits<double>::infinity();
  double dual_cone = std::numeric_limits<double>::infinity();
  double sandwich = std::numeric_limits<double>::infinity();

  // Feasible candidates: projected perturbations of u at a few magnitudes,
  // the projected unconstrained solve, and the obstacle itself.
  std::vector<GridFunction> feasible;
  feasible.push_back(GridFunction(basis.domain,
                                  op.solve(f).values().cwiseMax(psi.values())));
  feasible.push_back(psi);
  for (int t = 0; t < samples; ++t) {
    const double mag = scale * std::pow(10.0, -2.0 * rng.uniform01());
    Vector pert = u.values() + mag * rng.normal_vector(u.size());
    feasible.push_back(GridFunction(basis.domain, pert.cwiseMax(psi.values())));
  }
  for (const GridFunction& v : feasible) {
    const GridFunction diff(basis.domain, v.values() - u.values());
    energy = std::min(energy, energy_of(v) - ju);
    vi = std::min(vi, l2_inner(basis, residual, diff));
  }

  // Candidates in the dual cone {A v >= f} and in the two-sided band
  // {f <= A v <= max(f, A psi)}, generated through the inverse.
  for (int t = 0; t < samples; ++t) {
    Vector bump(u.size());
    for (int i = 0; i < u.size(); ++i) bump[i] = std::abs(rng.normal());
    const GridFunction v1 =
        op.solve(GridFunction(basis.domain, f.values() + scale * bump));
    const GridFunction d1(basis.domain, v1.values() - u.values());
    const GridFunction au_minus_apsi(basis.domain, sol.au.values() - apsi.values());
    dual_cone = std::min(dual_cone, l2_inner(basis, au_minus_apsi, d1));

    Vector target(u.size());
    for (int i = 0; i < u.size(); ++i) {
      const double hi = std::max(f.values()[i], apsi.values()[i]);
      target[i] = f.values()[i] + rng.uniform01() * (hi - f.values()[i]);
    }
    const GridFunction v2 = op.solve(GridFunction(basis.domain, target));
    const GridFunction d2(basis.domain, v2.values() - u.values());
    sandwich = std::min(sandwich, l2_inner(basis, au_minus_apsi, d2));
  }

  rep.energy = energy;
  rep.vi = vi;
  rep.dual = residual.values().minCoeff();
  rep.pairing = -std::abs(l2_inner(basis, residual,
                                   GridFunction(basis.domain, u.values() - psi.values())));
  rep.dual_cone = dual_cone;
  rep.sandwich = sandwich;
  return rep;
}

OrderingReport compare_solutions(const ObstacleProblem& p1, const ObstacleProblem& p2,
                                 const SolverConfig& cfg, double tol) {
  if (!(p1.op.basis().domain == p2.op.basis().domain))
    throw std::invalid_argument("compare: problems live on different grids");
  if ((p2.force.values() - p1.force.values()).minCoeff() < 0.0)
    throw std::invalid_argument("compare: forces are not ordered, need f1 <= f2");
  if ((p2.obstacle.values() - p1.obstacle.values()).minCoeff() < 0.0)
    throw std::invalid_argument("compare: obstacles are not ordered, need psi1 <= psi2");

  OrderingReport rep;
  rep.first = solve_vi_psor(p1, cfg);
  rep.second = solve_vi_psor(p2, cfg);
  const Vector gap = rep.second.u.values() - rep.first.u.values();
  rep.min_gap = gap.minCoeff();
  rep.violations = static_cast<int>((gap.array() < -tol).count());
  return rep;
}

PositivePartReport positive_part_lemmas_check(const EigenBasis& basis, double s, int trials,
                                              std::uint64_t seed, double tol) {
  PositivePartReport rep;
  rep.trials = trials;
  rep.worst_l2_margin = std::numeric_limits<double>::infinity();
  rep.worst_seminorm_margin = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  const int n = basis.domain.total_nodes();

  for (int t = 0; t < trials; ++t) {
    const GridFunction mu(basis.domain, rng.normal_vector(n));
    const GridFunction zeta(basis.domain, rng.normal_vector(n));
    const GridFunction sum(basis.domain, mu.values() + zeta.values());
    const double lhs = l2_norm(basis, positive_part(sum));
    const double rhs = l2_norm(basis, positive_part(mu)) + l2_norm(basis, positive_part(zeta));
    const double margin = rhs - lhs;
    rep.worst_l2_margin = std::min(rep.worst_l2_margin, margin);
    if (margin < -tol) ++rep.l2_violations;

    const GridFunction v = random_smooth(basis, rng, 1.0, 0.5);
    const GridFunction shifted(basis.domain, v.values().array() - 0.3);
    const double semi_full = gagliardo_sq(basis, s, shifted);
    const double semi_pos = gagliardo_sq(basis, s, positive_part(shifted));
    const double semi_margin = semi_full - semi_pos;
    rep.worst_seminorm_margin = std::min(rep.worst_seminorm_margin, semi_margin);
    if (semi_margin < -tol) ++rep.seminorm_violations;
  }
  return rep;
}

}  // namespace fraclap
