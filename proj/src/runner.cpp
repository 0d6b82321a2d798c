#include "fraclap/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>

#include "fraclap/evolution.hpp"
#include "fraclap/extension.hpp"
#include "fraclap/profiles.hpp"
#include "fraclap/report.hpp"
#include "fraclap/rng.hpp"
#include "fraclap/suite.hpp"

namespace fraclap {

namespace {

std::string coord_header(const DomainSpec& dom) {
  return dom.dim == 1 ? "x" : "x,y";
}

void push_coords(std::vector<std::string>& cells, const DomainSpec& dom, int j) {
  const auto xy = node_coords(dom, j);
  cells.push_back(fmt_g(xy[0]));
  if (dom.dim == 2) cells.push_back(fmt_g(xy[1]));
}

struct Setup {
  EigenBasis basis;
  Rng rng;

  Setup(const RunConfig& cfg, std::uint64_t seed) : basis(build_basis(cfg.domain)), rng(seed) {}
};

void write_field_csv(ArtifactWriter& w, const std::string& name, const EigenBasis& basis,
                     const std::vector<std::pair<std::string, const GridFunction*>>& fields) {
  std::string header = coord_header(basis.domain);
  for (const auto& [label, fn] : fields) header += "," + label;
  auto csv = w.open_csv(name, header);
  for (int j = 0; j < basis.size(); ++j) {
    std::vector<std::string> cells;
    push_coords(cells, basis.domain, j);
    for (const auto& [label, fn] : fields) cells.push_back(fmt_g(fn->values()[j]));
    ArtifactWriter::csv_row(csv, cells);
  }
}

int cmd_solve_poisson(const RunConfig& cfg, Setup& st, ArtifactWriter& w) {
  FracOperator op(st.basis, cfg.s, cfg.shift);
  const GridFunction f = make_grid_profile(cfg.source, st.basis, st.rng);
  const GridFunction u = op.solve(f);
  const GridFunction au = op.apply(u);

  write_field_csv(w, "solution.csv", st.basis,
                  {{"f", &f}, {"u", &u}, {"au", &au}});
  w.summary("s", cfg.s);
  w.summary("shift", cfg.shift);
  w.summary("l2_norm_u", l2_norm(st.basis, u));
  w.summary("hs_norm_u", hs_norm(st.basis, cfg.s, u));
  w.summary("x0_norm_u", x0_norm(st.basis, cfg.s, u));
  const double res = (au.values() - f.values()).cwiseAbs().maxCoeff();
  w.check_le("solve residual sup norm", res, 1e-9 * (1.0 + f.values().cwiseAbs().maxCoeff()));
  return w.finalize();
}

int cmd_solve_obstacle(const RunConfig& cfg, Setup& st, ArtifactWriter& w) {
  FracOperator op(st.basis, cfg.s, cfg.shift);
  const GridFunction f = make_grid_profile(cfg.source, st.basis, st.rng);
  const GridFunction psi = make_grid_profile(cfg.obstacle, st.basis, st.rng);
  ObstacleProblem prob(op, f, psi);

  const VISolution sol = solve_vi_psor(prob, cfg.solver);
  auto csv = w.open_csv("solution.csv", coord_header(st.basis.domain) +
                                            ",f,psi,u,au,active");
  for (int j = 0; j < st.basis.size(); ++j) {
    std::vector<std::string> cells;
    push_coords(cells, st.basis.domain, j);
    cells.push_back(fmt_g(f.values()[j]));
    cells.push_back(fmt_g(psi.values()[j]));
    cells.push_back(fmt_g(sol.u.values()[j]));
    cells.push_back(fmt_g(sol.au.values()[j]));
    cells.push_back(std::to_string(int(sol.active[j])));
    ArtifactWriter::csv_row(csv, cells);
  }
  int active_count = 0;
  for (auto a : sol.active) active_count += a;
  w.summary("iterations", sol.iterations);
  w.summary("active nodes", active_count);
  w.check("sweep converged", sol.converged);
  w.check_ge("feasibility", sol.residuals.feasibility, -cfg.solver.residual_tol);
  w.check_ge("dual feasibility", sol.residuals.dual_feasibility, -cfg.solver.residual_tol);
  w.check_le("complementarity", sol.residuals.complementarity, cfg.solver.residual_tol);

  if (op.size() <= cfg.solver.oracle_cap) {
    const VISolution oracle = solve_vi_active_set(prob, cfg.solver);
    const double gap = (sol.u.values() - oracle.u.values()).cwiseAbs().maxCoeff();
    w.check_le("distance to active-set solve", gap, 1e-7);
  }
  return w.finalize();
}

int cmd_verify_ls(const RunConfig& cfg, Setup& st, ArtifactWriter& w) {
  FracOperator op(st.basis, cfg.s, cfg.shift);
  const GridFunction f = make_grid_profile(cfg.source, st.basis, st.rng);
  const GridFunction psi = make_grid_profile(cfg.obstacle, st.basis, st.rng);
  ObstacleProblem prob(op, f, psi);
  const VISolution sol = solve_vi_psor(prob, cfg.solver);
  const GridFunction apsi = op.apply(psi);

  auto csv = w.open_csv("bounds.csv", coord_header(st.basis.domain) +
                                          ",f,apsi,au,lower_margin,upper_margin");
  for (int j = 0; j < st.basis.size(); ++j) {
    std::vector<std::string> cells;
    push_coords(cells, st.basis.domain, j);
    const double lo = sol.au.values()[j] - f.values()[j];
    const double hi = std::max(f.values()[j], apsi.values()[j]) - sol.au.values()[j];
    cells.push_back(fmt_g(f.values()[j]));
    cells.push_back(fmt_g(apsi.values()[j]));
    cells.push_back(fmt_g(sol.au.values()[j]));
    cells.push_back(fmt_g(lo));
    cells.push_back(fmt_g(hi));
    ArtifactWriter::csv_row(csv, cells);
  }

  const BoundReport rep = verify_lewy_stampacchia(sol, prob, 1e-7);
  w.check("sweep converged", sol.converged);
  w.check_ge("lower bound margin", rep.min_lower_margin, -rep.tol);
  w.check_ge("upper bound margin", rep.min_upper_margin, -rep.tol);
  w.check("no pointwise bound violations", rep.violations == 0);

  const ConditionsReport cond =
      check_equivalent_conditions(sol, prob, cfg.solver.trials, st.rng.raw());
  w.summary("condition samples", cond.samples);
  w.check_ge("energy minimality margin", cond.energy, -1e-7);
  w.check_ge("variational inequality margin", cond.vi, -1e-7);
  w.check_ge("dual sign margin", cond.dual, -1e-7);
  w.check_ge("complementarity pairing", cond.pairing, -1e-7);
  w.check_ge("dual cone pairing", cond.dual_cone, -1e-7);
  w.check_ge("two-sided band pairing", cond.sandwich, -1e-7);
  return w.finalize();
}

TimeGrid grid_from(const RunConfig& cfg) {
  if (!cfg.times.empty()) {
    TimeGrid g;
    g.t = cfg.times;
    g.validate();
    return g;
  }
  return TimeGrid::uniform(cfg.t_end, cfg.steps);
}

int cmd_evolve(const RunConfig& cfg, Setup& st, ArtifactWriter& w) {
  if (cfg.shift != 0.0)
    throw ConfigError("config: operator.shift must be 0 for evolution runs");
  FracOperator op(st.basis, cfg.s, 0.0);
  const TimeGrid grid = grid_from(cfg);
  const double default_dt = grid.tau_max() / 8.0;
  Rng source_rng(st.rng.raw());
  const TimeSource f = make_time_source(cfg.source, st.basis, source_rng, default_dt);
  const GridFunction u0 = cfg.initial.present
                              ? make_grid_profile(cfg.initial, st.basis, st.rng)
                              : GridFunction::zero(cfg.domain);

  EvolveConfig ecfg;
  ecfg.vi = cfg.solver;
  if (cfg.fstar.present) ecfg.force_limit = make_grid_profile(cfg.fstar, st.basis, st.rng);

  const EvolutionState run = evolve(u0, f, grid, op, ecfg);

  auto csv = w.open_csv("evolution.csv",
                        "step,t,tau,hs_energy_sq,rate_l2_sq,monotone_margin,g_min,pairing,"
                        "euler_residual,bound_margin,energy_slack");
  for (int k = 1; k <= grid.steps(); ++k)
    ArtifactWriter::csv_row(
        csv, {std::to_string(k), fmt_g(grid.t[k]), fmt_g(grid.tau(k)),
              fmt_g(run.hs_energy_sq[k]), fmt_g(run.rate_l2_sq[k - 1]),
              fmt_g(run.monotone_margin[k - 1]), fmt_g(run.g_min[k - 1]),
              fmt_g(run.pairing[k - 1]), fmt_g(run.euler_residual[k - 1]),
              fmt_g(run.bound_margin[k - 1]), fmt_g(run.energy_slack[k - 1])});
  write_field_csv(w, "final_state.csv", st.basis,
                  {{"u0", &u0}, {"u_final", &run.snapshots.back()}});

  w.summary("steps", grid.steps());
  w.summary("final hs energy sq", run.hs_energy_sq.back());
  w.check_ge("monotonicity", run.worst_monotone(), -ecfg.law_tol);
  w.check_ge("defect sign", run.worst_g_min(), -ecfg.law_tol);
  w.check_le("defect pairing", run.worst_pairing(), ecfg.law_tol);
  w.check_le("euler residual", run.worst_euler_residual(), ecfg.law_tol);
  w.check_ge("defect cap margin", run.worst_bound_margin(), -ecfg.law_tol);
  w.check_ge("energy slack", run.worst_energy_slack(), -ecfg.law_tol);
  if (cfg.fstar.present)
    w.check_ge("force limit margin", run.force_limit_margin, 0.0);
  return w.finalize();
}

int cmd_compare(const RunConfig& cfg, Setup& st, ArtifactWriter& w) {
  FracOperator op(st.basis, cfg.s, cfg.shift);
  const GridFunction f1 = make_grid_profile(cfg.source, st.basis, st.rng);
  const GridFunction psi1 = make_grid_profile(cfg.obstacle, st.basis, st.rng);
  const GridFunction f2 =
      cfg.source2.present ? make_grid_profile(cfg.source2, st.basis, st.rng) : f1;
  const GridFunction psi2 =
      cfg.obstacle2.present ? make_grid_profile(cfg.obstacle2, st.basis, st.rng) : psi1;

  ObstacleProblem p1(op, f1, psi1);
  ObstacleProblem p2(op, f2, psi2);
  const OrderingReport rep = compare_solutions(p1, p2, cfg.solver, 1e-7);

  auto csv = w.open_csv("comparison.csv", coord_header(st.basis.domain) +
                                              ",f1,f2,psi1,psi2,u1,u2,gap");
  for (int j = 0; j < st.basis.size(); ++j) {
    std::vector<std::string> cells;
    push_coords(cells, st.basis.domain, j);
    const double g = rep.second.u.values()[j] - rep.first.u.values()[j];
    for (double v : {f1.values()[j], f2.values()[j], psi1.values()[j], psi2.values()[j],
                     rep.first.u.values()[j], rep.second.u.values()[j], g})
      cells.push_back(fmt_g(v));
    ArtifactWriter::csv_row(csv, cells);
  }
  w.summary("min gap", rep.min_gap);
  w.check("both sweeps converged", rep.first.converged && rep.second.converged);
  w.check("ordering preserved", rep.violations == 0);
  w.check_ge("smallest solution gap", rep.min_gap, -1e-7);
  return w.finalize();
}

int cmd_asymptotic(const RunConfig& cfg, Setup& st, ArtifactWriter& w) {
  if (cfg.shift != 0.0)
    throw ConfigError("config: operator.shift must be 0 for evolution runs");
  FracOperator op(st.basis, cfg.s, 0.0);
  const GridFunction f = make_grid_profile(cfg.source, st.basis, st.rng);
  const GridFunction u0 = cfg.initial.present
                              ? make_grid_profile(cfg.initial, st.basis, st.rng)
                              : GridFunction::zero(cfg.domain);
  AsymptoticConfig acfg;
  acfg.stop_tol = cfg.stop_tol;
  acfg.vi = cfg.solver;
  const AsymptoticReport rep = asymptotic_limit(u0, f, op, cfg.horizon, cfg.step, acfg);

  auto csv = w.open_csv("trajectory.csv", "step,t,hs_energy_sq,rate_l2_sq");
  for (int k = 1; k <= rep.run.grid.steps(); ++k)
    ArtifactWriter::csv_row(csv, {std::to_string(k), fmt_g(rep.run.grid.t[k]),
                                  fmt_g(rep.run.hs_energy_sq[k]),
                                  fmt_g(rep.run.rate_l2_sq[k - 1])});
  write_field_csv(w, "limit.csv", st.basis,
                  {{"u0", &u0},
                   {"f", &f},
                   {"u_final", &rep.run.snapshots.back()},
                   {"u_limit", &rep.limit.u}});

  w.summary("stop time", rep.stop_time);
  w.summary("steps taken", rep.steps_taken);
  w.check("reached a stationary state before the horizon", rep.stationary);
  w.check_le("distance to the constrained stationary solve", rep.hs_error, cfg.asymp_tol);
  w.check_ge("final state above the initial datum", rep.above_initial, -1e-9);
  w.check_ge("stationary dual margin", rep.dual_margin, -1e-7);
  return w.finalize();
}

int cmd_extension_check(const RunConfig& cfg, Setup& st, ArtifactWriter& w) {
  FracOperator op(st.basis, cfg.s, 0.0);
  const GridFunction v = cfg.source.present
                             ? make_grid_profile(cfg.source, st.basis, st.rng)
                             : GridFunction(cfg.domain, st.basis.eigenvectors.col(0));

  const auto rows = extension_refinement_study(st.basis, cfg.s, v, cfg.ext_levels,
                                               cfg.ext_height_factor, cfg.ext_grading);
  auto csv = w.open_csv("refinement.csv",
                        "m_levels,height,s,mode_count,trace_rel_error,energy_kappa");
  for (const RefinementRow& r : rows)
    ArtifactWriter::csv_row(csv, {std::to_string(r.m_levels), fmt_g(r.height), fmt_g(r.s),
                                  std::to_string(r.mode_count), fmt_g(r.trace_rel_error),
                                  fmt_g(r.energy_kappa)});

  const ExtensionMesh mesh =
      make_extension_mesh(st.basis, cfg.s, cfg.ext_levels.back(),
                          default_height(st.basis, cfg.ext_height_factor), cfg.ext_grading);
  const ExtensionSolution sol = solve_extension(mesh, v);
  const GridFunction scaled(cfg.domain, sol.neumann_trace.values() / trace_constant(cfg.s));
  write_field_csv(w, "trace.csv", st.basis, {{"v", &v}, {"weighted_flux", &scaled}});

  w.summary("trace normalization", trace_constant(cfg.s));
  w.summary("final kappa", rows.back().energy_kappa);
  w.check_le("final trace relative error", rows.back().trace_rel_error, 0.05);
  bool decreasing = true;
  for (size_t i = 1; i < rows.size(); ++i)
    decreasing = decreasing && rows[i].trace_rel_error < rows[i - 1].trace_rel_error;
  w.check("trace error decreases under refinement", decreasing);
  return w.finalize();
}

int cmd_suite(std::uint64_t seed, ArtifactWriter& w, bool verbose) {
  const std::vector<CriterionResult> results = run_acceptance_suite(seed, &w);
  for (const CriterionResult& r : results) {
    w.summary("criterion " + std::to_string(r.number) + " " + r.name, r.detail);
    w.check(r.name, r.pass);
    if (verbose)
      std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.number << " " << r.name << ": "
                << r.detail << "\n";
  }
  return w.finalize();
}

}  // namespace

int run_command(RunConfig cfg, const RunOptions& opts) {
  if (opts.seed_overridden) cfg.seed = opts.seed;
  cfg.solver.seed = cfg.seed;
  if (!opts.out_dir.empty()) {
    cfg.out_dir = opts.out_dir;
  } else if (const char* env = std::getenv("FRACLAP_OUT"); env && *env) {
    cfg.out_dir = env;
  }

  Setup st(cfg, cfg.seed);
  ArtifactWriter writer(cfg.out_dir, cfg.seed);

  int rc;
  if (cfg.command == "solve-poisson") {
    rc = cmd_solve_poisson(cfg, st, writer);
  } else if (cfg.command == "solve-obstacle") {
    rc = cmd_solve_obstacle(cfg, st, writer);
  } else if (cfg.command == "verify-ls") {
    rc = cmd_verify_ls(cfg, st, writer);
  } else if (cfg.command == "evolve") {
    rc = cmd_evolve(cfg, st, writer);
  } else if (cfg.command == "compare") {
    rc = cmd_compare(cfg, st, writer);
  } else if (cfg.command == "asymptotic") {
    rc = cmd_asymptotic(cfg, st, writer);
  } else if (cfg.command == "extension-check") {
    rc = cmd_extension_check(cfg, st, writer);
  } else if (cfg.command == "suite") {
    rc = cmd_suite(cfg.seed, writer, opts.verbose);
  } else {
    throw ConfigError("config: unknown command '" + cfg.command + "'");
  }

  if (opts.verbose || rc != 0)
    std::cout << "checks " << (rc == 0 ? "passed" : "FAILED") << ", artifacts in "
              << writer.dir().string() << " (" << writer.failures() << " failures)\n";
  return rc;
}

}  // namespace fraclap
