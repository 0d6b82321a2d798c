#include <doctest.h>

#include <cmath>

#include "fraclap/obstacle.hpp"
#include "fraclap/rng.hpp"

using namespace fraclap;

namespace {

GridFunction hat_obstacle(const EigenBasis& b) {
  Vector psi(b.size());
  for (int j = 0; j < b.size(); ++j) {
    const double x = node_coords(b.domain, j)[0];
    psi[j] = std::max(0.0, 0.2 - std::abs(x - 0.5));
  }
  return GridFunction(b.domain, psi);
}

}  // namespace

TEST_CASE("hat obstacle under a negative force: sweep matches the direct solve") {
  const EigenBasis b = build_basis({1, {1.0}, {63}});
  FracOperator op(b, 0.5);
  const GridFunction f = GridFunction::constant(b.domain, -10.0);
  const GridFunction psi = hat_obstacle(b);
  ObstacleProblem prob(op, f, psi);
  SolverConfig cfg;

  const VISolution sweep = solve_vi_psor(prob, cfg);
  const VISolution direct = solve_vi_active_set(prob, cfg);
  CHECK(sweep.converged);
  CHECK((sweep.u.values() - direct.u.values()).cwiseAbs().maxCoeff() < 1e-8);

  // the force is strong enough to press the membrane onto the hat everywhere
  int active = 0;
  for (auto a : direct.active) active += a;
  CHECK(active > 0);
  CHECK(sweep.residuals.feasibility >= -1e-12);
  CHECK(sweep.residuals.dual_feasibility >= -1e-7);
  CHECK(sweep.residuals.complementarity <= 1e-7);
}

TEST_CASE("hat obstacle without a force: contact at the peak, detached tails") {
  const EigenBasis b = build_basis({1, {1.0}, {63}});
  FracOperator op(b, 0.5);
  const GridFunction f = GridFunction::zero(b.domain);
  const GridFunction psi = hat_obstacle(b);
  ObstacleProblem prob(op, f, psi);
  SolverConfig cfg;

  const VISolution sol = solve_vi_active_set(prob, cfg);
  // u = psi fails dual feasibility outside the hat support (the operator rows
  // have negative off-diagonal entries), and u = 0 fails the constraint, so
  // the contact set is nonempty and proper
  int active = 0;
  for (auto a : sol.active) active += a;
  CHECK(active > 0);
  CHECK(active < b.size());
  CHECK(sol.u.values().minCoeff() >= 0.0);

  const VISolution sweep = solve_vi_psor(prob, cfg);
  CHECK(sweep.converged);
  CHECK((sweep.u.values() - sol.u.values()).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("obstacle far below: the constraint never binds") {
  const EigenBasis b = build_basis({1, {1.0}, {40}});
  FracOperator op(b, 0.6);
  Rng rng(3);
  const GridFunction f = random_smooth(b, rng, 2.0);
  const GridFunction psi = GridFunction::constant(b.domain, -50.0);
  ObstacleProblem prob(op, f, psi);
  SolverConfig cfg;

  const VISolution sol = solve_vi_psor(prob, cfg);
  const GridFunction unconstrained = op.solve(f);
  CHECK((sol.u.values() - unconstrained.values()).cwiseAbs().maxCoeff() < 1e-7);
  for (auto a : sol.active) CHECK(a == 0);
}

TEST_CASE("strongly negative force: the solution sits on the obstacle") {
  const EigenBasis b = build_basis({1, {1.0}, {24}});
  FracOperator op(b, 0.5);
  const GridFunction f = GridFunction::constant(b.domain, -100.0);
  const GridFunction psi = GridFunction::zero(b.domain);
  ObstacleProblem prob(op, f, psi);
  SolverConfig cfg;

  const VISolution sol = solve_vi_psor(prob, cfg);
  CHECK(sol.u.values().cwiseAbs().maxCoeff() < 1e-12);
  const VISolution direct = solve_vi_active_set(prob, cfg);
  CHECK(direct.u.values().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("the constrained solution is independent of the starting iterate") {
  const EigenBasis b = build_basis({1, {1.0}, {32}});
  FracOperator op(b, 0.4);
  Rng rng(7);
  const GridFunction f(b.domain, 4.0 * rng.normal_vector(b.size()));
  const GridFunction psi = random_smooth(b, rng, 0.5);
  ObstacleProblem prob(op, f, psi);
  SolverConfig cfg;

  const GridFunction high = GridFunction::constant(b.domain, 25.0);
  const GridFunction low = psi;
  const VISolution a = solve_vi_psor(prob, cfg, &high);
  const VISolution c = solve_vi_psor(prob, cfg, &low);
  CHECK(a.converged);
  CHECK(c.converged);
  CHECK((a.u.values() - c.u.values()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("two-sided bound holds on a batch of random problems") {
  const EigenBasis b = build_basis({1, {1.0}, {32}});
  Rng rng(11);
  SolverConfig cfg;
  for (double s : {0.25, 0.5, 0.75}) {
    FracOperator op(b, s);
    for (int t = 0; t < 5; ++t) {
      const GridFunction f(b.domain, 5.0 * rng.normal_vector(b.size()));
      const GridFunction psi = random_smooth(b, rng, 1.0);
      ObstacleProblem prob(op, f, psi);
      const VISolution sol = solve_vi_psor(prob, cfg);
      const BoundReport rep = verify_lewy_stampacchia(sol, prob);
      CHECK(rep.violations == 0);
      CHECK(rep.min_lower_margin >= -rep.tol);
      CHECK(rep.min_upper_margin >= -rep.tol);
    }
  }
}

TEST_CASE("optimality characterizations agree on the solution") {
  const EigenBasis b = build_basis({1, {1.0}, {24}});
  FracOperator op(b, 0.5);
  Rng rng(13);
  const GridFunction f(b.domain, 3.0 * rng.normal_vector(b.size()));
  const GridFunction psi = random_smooth(b, rng, 0.7);
  ObstacleProblem prob(op, f, psi);
  SolverConfig cfg;
  const VISolution sol = solve_vi_psor(prob, cfg);

  const ConditionsReport rep = check_equivalent_conditions(sol, prob, 64, 99);
  CHECK(rep.worst() >= -1e-7);

  // negative control: push the iterate off the solution and the energy and
  // inequality margins must flag it
  VISolution bad = sol;
  bad.u = GridFunction(b.domain, sol.u.values() + 0.1 * b.eigenvectors.col(0));
  bad.au = op.apply(bad.u);
  const ConditionsReport flag = check_equivalent_conditions(bad, prob, 64, 99);
  CHECK(flag.worst() < -1e-7);
}

TEST_CASE("any supersolution of the upper bound dominates the solution") {
  const EigenBasis b = build_basis({1, {1.0}, {32}});
  FracOperator op(b, 0.5);
  Rng rng(17);
  const GridFunction f(b.domain, 4.0 * rng.normal_vector(b.size()));
  const GridFunction psi = random_smooth(b, rng, 0.6);
  ObstacleProblem prob(op, f, psi);
  SolverConfig cfg;
  const VISolution sol = solve_vi_active_set(prob, cfg);

  const Vector apsi = op.apply(psi).values();
  for (int t = 0; t < 10; ++t) {
    Vector g(b.size());
    for (int i = 0; i < b.size(); ++i)
      g[i] = std::max(f.values()[i], apsi[i]) + std::abs(rng.normal());
    const GridFunction w = op.solve(GridFunction(b.domain, g));
    CHECK((w.values() - sol.u.values()).minCoeff() >= -1e-9);
  }
}

TEST_CASE("ordered data produce ordered solutions, unordered data are rejected") {
  const EigenBasis b = build_basis({1, {1.0}, {20}});
  FracOperator op(b, 0.5);
  Rng rng(19);
  SolverConfig cfg;

  const GridFunction f1(b.domain, 3.0 * rng.normal_vector(b.size()));
  Vector df(b.size()), dpsi(b.size());
  for (int i = 0; i < b.size(); ++i) df[i] = std::abs(rng.normal());
  for (int i = 0; i < b.size(); ++i) dpsi[i] = 0.2 * std::abs(rng.normal());
  const GridFunction psi1 = random_smooth(b, rng, 0.5);
  ObstacleProblem p1(op, f1, psi1);
  ObstacleProblem p2(op, GridFunction(b.domain, f1.values() + df),
                     GridFunction(b.domain, psi1.values() + dpsi));
  const OrderingReport rep = compare_solutions(p1, p2, cfg);
  CHECK(rep.violations == 0);
  CHECK(rep.min_gap >= -1e-8);

  CHECK_THROWS_AS(compare_solutions(p2, p1, cfg), std::invalid_argument);
}

TEST_CASE("positive-part inequalities hold over random trials") {
  const EigenBasis b = build_basis({1, {1.0}, {20}});
  const PositivePartReport rep = positive_part_lemmas_check(b, 0.5, 64, 23);
  CHECK(rep.l2_violations == 0);
  CHECK(rep.seminorm_violations == 0);
  CHECK(rep.worst_l2_margin >= -1e-10);
  CHECK(rep.worst_seminorm_margin >= -1e-10);
}

TEST_CASE("problem data must live on the operator grid") {
  const EigenBasis b = build_basis({1, {1.0}, {8}});
  const EigenBasis other = build_basis({1, {1.0}, {9}});
  FracOperator op(b, 0.5);
  CHECK_THROWS_AS(ObstacleProblem(op, GridFunction::zero(other.domain),
                                  GridFunction::zero(b.domain)),
                  std::invalid_argument);
}

TEST_CASE("direct active-set path refuses grids above its cap") {
  const EigenBasis b = build_basis({1, {1.0}, {40}});
  FracOperator op(b, 0.5);
  ObstacleProblem prob(op, GridFunction::zero(b.domain), GridFunction::zero(b.domain));
  SolverConfig cfg;
  cfg.oracle_cap = 16;
  CHECK_THROWS_AS(solve_vi_active_set(prob, cfg), std::invalid_argument);
}

TEST_CASE("solver configuration is validated") {
  SolverConfig cfg;
  cfg.omega = 2.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SolverConfig{};
  cfg.max_iter = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
