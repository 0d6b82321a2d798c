#include "fraclap/suite.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "fraclap/evolution.hpp"
#include "fraclap/extension.hpp"
#include "fraclap/obstacle.hpp"
#include "fraclap/profiles.hpp"
#include "fraclap/rng.hpp"

namespace fraclap {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_e(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

GridFunction bump(const EigenBasis& basis, double amplitude, double center_frac, double width) {
  ProfileSpec p;
  p.kind = "bump";
  p.amplitude = amplitude;
  for (int a = 0; a < basis.domain.dim; ++a)
    p.center.push_back(center_frac * basis.domain.lengths[a]);
  p.width = width;
  Rng dummy(0);
  return make_grid_profile(p, basis, dummy);
}

// ---------------------------------------------------------------------------
// criteria 1 and 2: randomized obstacle battery, two-sided bounds on A u and
// agreement between the sweep solver and the direct active-set solve
// ---------------------------------------------------------------------------

struct BatteryOutcome {
  int instances = 0;
  int ls_violations = 0;
  int kkt_violations = 0;
  int not_converged = 0;
  double worst_lower = kInf;
  double worst_upper = kInf;
  double worst_feasibility = kInf;
  double worst_dual = kInf;
  double worst_complementarity = 0.0;
  double max_solver_gap = 0.0;
};

BatteryOutcome run_obstacle_battery(std::uint64_t seed, ArtifactWriter* artifacts) {
  BatteryOutcome out;
  Rng rng(seed);
  SolverConfig cfg;

  std::ofstream csv;
  if (artifacts)
    csv = artifacts->open_csv(
        "obstacle_suite.csv",
        "s,dim,shift,instance,psor_iterations,oracle_iterations,solver_gap,"
        "ls_lower_margin,ls_upper_margin,feasibility,dual_feasibility,complementarity");

  const DomainSpec dom1{1, {1.0}, {32}};
  const DomainSpec dom2{2, {1.0, 1.0}, {16, 16}};
  const EigenBasis basis1 = build_basis(dom1);
  const EigenBasis basis2 = build_basis(dom2);

  for (double s : {0.25, 0.5, 0.75}) {
    for (const EigenBasis* basis : {&basis1, &basis2}) {
      for (double shift : {0.0, 1.0}) {
        FracOperator op(*basis, s, shift);
        for (int inst = 0; inst < 50; ++inst) {
          const int n = basis->size();
          const GridFunction f(basis->domain, 5.0 * rng.normal_vector(n));
          const GridFunction psi = random_smooth(*basis, rng, 0.8);
          ObstacleProblem prob(op, f, psi);

          const VISolution psor = solve_vi_psor(prob, cfg);
          const VISolution oracle = solve_vi_active_set(prob, cfg);
          const double gap =
              (psor.u.values() - oracle.u.values()).cwiseAbs().maxCoeff();
          const BoundReport ls = verify_lewy_stampacchia(psor, prob, 1e-7);

          ++out.instances;
          if (!psor.converged) ++out.not_converged;
          out.ls_violations += ls.violations;
          out.worst_lower = std::min(out.worst_lower, ls.min_lower_margin);
          out.worst_upper = std::min(out.worst_upper, ls.min_upper_margin);
          out.worst_feasibility = std::min(out.worst_feasibility, psor.residuals.feasibility);
          out.worst_dual = std::min(out.worst_dual, psor.residuals.dual_feasibility);
          out.worst_complementarity =
              std::max(out.worst_complementarity, psor.residuals.complementarity);
          if (psor.residuals.feasibility < -1e-7 || psor.residuals.dual_feasibility < -1e-7 ||
              psor.residuals.complementarity > 1e-7)
            ++out.kkt_violations;
          out.max_solver_gap = std::max(out.max_solver_gap, gap);

          if (artifacts)
            ArtifactWriter::csv_row(
                csv, {fmt_g(s), std::to_string(basis->domain.dim), fmt_g(shift),
                      std::to_string(inst), std::to_string(psor.iterations),
                      std::to_string(oracle.iterations), fmt_g(gap),
                      fmt_g(ls.min_lower_margin), fmt_g(ls.min_upper_margin),
                      fmt_g(psor.residuals.feasibility), fmt_g(psor.residuals.dual_feasibility),
                      fmt_g(psor.residuals.complementarity)});
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// criterion 3: sign structure of the dense operator
// ---------------------------------------------------------------------------

CriterionResult criterion_sign_structure(std::uint64_t seed, ArtifactWriter* artifacts) {
  CriterionResult res{3, "operator-sign-structure", true, ""};
  std::ofstream csv;
  if (artifacts)
    csv = artifacts->open_csv("sign_structure.csv",
                              "grid,s,shift,max_offdiag,offdiag_tol,min_diag,norm_inf,"
                              "worst_pairing,pairing_violations");

  struct GridCase {
    DomainSpec dom;
    std::string name;
  };
  const std::vector<GridCase> grids = {{{1, {1.0}, {16}}, "1d-16"},
                                       {{1, {1.0}, {32}}, "1d-32"},
                                       {{2, {1.0, 1.0}, {8, 8}}, "2d-8x8"}};
  double worst_rel_offdiag = -kInf;
  double worst_pairing = -kInf;
  int violations = 0;
  Rng rng(seed);
  for (const GridCase& g : grids) {
    const EigenBasis basis = build_basis(g.dom);
    for (int si = 1; si <= 9; ++si) {
      const double s = si / 10.0;
      for (double shift : {0.0, 1.0}) {
        FracOperator op(basis, s, shift);
        const SignStructureReport rep = sign_structure_report(op, 100, rng.raw(), 1e-10);
        const double tol = (g.dom.dim == 1) ? 1e-12 : 1e-12 * rep.norm_inf;
        if (rep.max_offdiag > tol || rep.min_diag <= 0.0) ++violations;
        violations += rep.pairing_violations;
        worst_rel_offdiag = std::max(worst_rel_offdiag, rep.max_offdiag / std::max(tol, 1e-300));
        worst_pairing = std::max(worst_pairing, rep.worst_pairing);
        if (artifacts)
          ArtifactWriter::csv_row(csv, {g.name, fmt_g(s), fmt_g(shift), fmt_g(rep.max_offdiag),
                                        fmt_g(tol), fmt_g(rep.min_diag), fmt_g(rep.norm_inf),
                                        fmt_g(rep.worst_pairing),
                                        std::to_string(rep.pairing_violations)});
      }
    }
  }
  res.pass = violations == 0;
  res.detail = "54 operator configs, 100 pairings each, violations " +
               std::to_string(violations) + ", worst pairing " + fmt_e(worst_pairing);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 4: ordered data produce ordered solutions
// ---------------------------------------------------------------------------

CriterionResult criterion_comparisons(std::uint64_t seed, ArtifactWriter* artifacts) {
  CriterionResult res{4, "ordered-data-ordered-solutions", true, ""};
  std::ofstream csv;
  if (artifacts) csv = artifacts->open_csv("comparisons.csv", "kind,instance,min_gap");

  Rng rng(seed);
  const DomainSpec dom{1, {1.0}, {16}};
  const EigenBasis basis = build_basis(dom);
  FracOperator op(basis, 0.5, 0.0);
  SolverConfig cfg;
  const int n = basis.size();

  double worst = kInf;
  int violations = 0;
  for (int i = 0; i < 20; ++i) {
    const GridFunction f1(dom, 5.0 * rng.normal_vector(n));
    Vector df(n), dpsi(n);
    for (int j = 0; j < n; ++j) df[j] = 2.0 * std::abs(rng.normal());
    for (int j = 0; j < n; ++j) dpsi[j] = 0.3 * std::abs(rng.normal());
    const GridFunction psi1 = random_smooth(basis, rng, 0.5);
    ObstacleProblem p1(op, f1, psi1);
    ObstacleProblem p2(op, GridFunction(dom, f1.values() + df),
                       GridFunction(dom, psi1.values() + dpsi));
    const OrderingReport rep = compare_solutions(p1, p2, cfg, 1e-7);
    worst = std::min(worst, rep.min_gap);
    violations += rep.violations;
    if (artifacts)
      ArtifactWriter::csv_row(csv, {"stationary", std::to_string(i), fmt_g(rep.min_gap)});
  }

  FracOperator op_evo(basis, 0.5, 0.0);
  const TimeGrid grid = TimeGrid::uniform(1.0, 20);
  EvolveConfig ecfg;
  for (int i = 0; i < 10; ++i) {
    const GridFunction u01 = random_smooth(basis, rng, 0.3);
    const GridFunction u02(dom, u01.values() + bump(basis, 0.2, 0.5, 0.2).values());
    const GridFunction g1 = random_smooth(basis, rng, 3.0);
    const TimeSource f1 = TimeSource::constant(g1);
    const TimeSource f2 = TimeSource::constant(GridFunction(dom, g1.values().array() + 0.5));
    const EvolutionOrderingReport rep =
        comparison_evolution(u01, f1, u02, f2, grid, op_evo, ecfg, 1e-7);
    worst = std::min(worst, rep.min_gap);
    violations += rep.violations;
    if (artifacts)
      ArtifactWriter::csv_row(csv, {"evolution", std::to_string(i), fmt_g(rep.min_gap)});
  }
  res.pass = violations == 0;
  res.detail = "20 stationary + 10 evolution pairs, violations " + std::to_string(violations) +
               ", smallest gap " + fmt_e(worst);
  return res;
}

// ---------------------------------------------------------------------------
// criterion 5: per-step laws across an evolution battery
// ---------------------------------------------------------------------------

struct EvolutionBattery {
  std::vector<EvolutionState> runs;
  std::vector<std::string> names;
  // operators kept alive for the states
  std::vector<std::unique_ptr<EigenBasis>> bases;
  std::vector<std::unique_ptr<FracOperator>> ops;
};

EvolutionBattery run_evolution_battery(std::uint64_t seed) {
  EvolutionBattery bat;
  Rng rng(seed);
  EvolveConfig cfg;

  const auto add_run = [&](const DomainSpec& dom, double s, const GridFunction& u0,
                           const TimeSource& f, const TimeGrid& grid, const std::string& name) {
    bat.bases.push_back(std::make_unique<EigenBasis>(build_basis(dom)));
    bat.ops.push_back(std::make_unique<FracOperator>(*bat.bases.back(), s, 0.0));
    bat.runs.push_back(evolve(u0, f, grid, *bat.ops.back(), cfg));
    bat.names.push_back(name);
  };

  const DomainSpec d16{1, {1.0}, {16}};
  const DomainSpec d2{2, {1.0, 1.0}, {8, 8}};

  {
    const EigenBasis b = build_basis(d16);
    add_run(d16, 0.3, GridFunction::zero(d16),
            TimeSource::constant(random_smooth(b, rng, 5.0)), TimeGrid::uniform(1.0, 20),
            "smooth-growth-s03");
  }
  {
    const EigenBasis b = build_basis(d16);
    const GridFunction g = bump(b, 5.0, 0.4, 0.15);
    add_run(d16, 0.7, random_smooth(b, rng, 0.2),
            TimeSource::callable(
                [g](double t) { return GridFunction(g.domain(), (2.0 * t) * g.values()); },
                0.01),
            TimeGrid::uniform(1.0, 20), "ramp-s07");
  }
  {
    const EigenBasis b = build_basis(d2);
    add_run(d2, 0.5, GridFunction::zero(d2), TimeSource::constant(bump(b, 4.0, 0.5, 0.25)),
            TimeGrid::uniform(0.5, 10), "2d-bump");
  }
  {
    add_run(d16, 0.5, GridFunction::zero(d16),
            TimeSource::constant(GridFunction::constant(d16, -3.0)),
            TimeGrid::uniform(1.0, 10), "frozen-negative-force");
  }
  {
    const EigenBasis b = build_basis(d16);
    const GridFunction g = bump(b, 4.0, 0.6, 0.2);
    TimeGrid grid;
    grid.t = {0.0, 0.02, 0.05, 0.1, 0.2, 0.35, 0.55, 0.8, 1.0};
    add_run(d16, 0.5, GridFunction::zero(d16),
            TimeSource::callable(
                [g](double t) {
                  return GridFunction(g.domain(), std::sin(3.0 * t) * g.values());
                },
                0.002),
            grid, "nonuniform-sin");
  }
  return bat;
}

CriterionResult criterion_step_laws(const EvolutionBattery& bat, ArtifactWriter* artifacts) {
  CriterionResult res{5, "evolution-step-laws", true, ""};
  std::ofstream csv;
  if (artifacts)
    csv = artifacts->open_csv("evolution_laws.csv",
                              "run,step,t,monotone_margin,g_min,pairing,euler_residual,"
                              "bound_margin,energy_slack");

  double monotone = kInf, gmin = kInf, bound = kInf, slack = kInf;
  double pairing = 0.0, euler = 0.0;
  for (size_t r = 0; r < bat.runs.size(); ++r) {
    const EvolutionState& st = bat.runs[r];
    monotone = std::min(monotone, st.worst_monotone());
    gmin = std::min(gmin, st.worst_g_min());
    bound = std::min(bound, st.worst_bound_margin());
    slack = std::min(slack, st.worst_energy_slack());
    pairing = std::max(pairing, st.worst_pairing());
    euler = std::max(euler, st.worst_euler_residual());
    if (artifacts)
      for (int k = 1; k <= st.grid.steps(); ++k)
        ArtifactWriter::csv_row(
            csv, {bat.names[r], std::to_string(k), fmt_g(st.grid.t[k]),
                  fmt_g(st.monotone_margin[k - 1]), fmt_g(st.g_min[k - 1]),
                  fmt_g(st.pairing[k - 1]), fmt_g(st.euler_residual[k - 1]),
                  fmt_g(st.bound_margin[k - 1]), fmt_g(st.energy_slack[k - 1])});
  }
  res.pass = monotone >= -1e-9 && gmin >= -1e-9 && pairing <= 1e-9 && euler <= 1e-7 &&
             bound >= -1e-7 && slack >= -1e-8;
  std::ostringstream d;
  d << bat.runs.size() << " runs; worst margins: monotone " << fmt_e(monotone) << ", defect "
    << fmt_e(gmin) << ", pairing " << fmt_e(pairing) << ", euler " << fmt_e(euler)
    << ", defect cap " << fmt_e(bound) << ", energy slack " << fmt_e(slack);
  res.detail = d.str();
  return res;
}

// ---------------------------------------------------------------------------
// criterion 6: two-run energy stability with constant 2
// ---------------------------------------------------------------------------

CriterionResult criterion_stability(std::uint64_t seed, ArtifactWriter* artifacts) {
  CriterionResult res{6, "two-run-energy-stability", true, ""};
  std::ofstream csv;
  if (artifacts) csv = artifacts->open_csv("stability.csv", "eps,lhs_sq,rhs_sq,ratio");

  Rng rng(seed);
  const DomainSpec dom{1, {1.0}, {16}};
  const EigenBasis basis = build_basis(dom);
  FracOperator op(basis, 0.5, 0.0);
  EvolveConfig cfg;
  const TimeGrid grid = TimeGrid::uniform(1.0, 20);

  const GridFunction u0 = random_smooth(basis, rng, 0.5);
  const GridFunction g = random_smooth(basis, rng, 3.0);
  const GridFunction pert_u = random_smooth(basis, rng, 1.0);
  const EvolutionState base = evolve(u0, TimeSource::constant(g), grid, op, cfg);

  double worst_ratio = 0.0;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const GridFunction u0p(dom, u0.values() + eps * pert_u.values());
    const GridFunction gp(dom, g.values().array() + eps);
    const EvolutionState other = evolve(u0p, TimeSource::constant(gp), grid, op, cfg);
    const StabilityReport rep = stability_check(base, other, op, 1e-6);
    worst_ratio = std::max(worst_ratio, rep.ratio);
    if (!rep.pass) res.pass = false;
    if (artifacts)
      ArtifactWriter::csv_row(csv,
                              {fmt_g(eps), fmt_g(rep.lhs_sq), fmt_g(rep.rhs_sq), fmt_g(rep.ratio)});
  }
  const StabilityReport same = stability_check(base, base, op, 1e-6);
  if (!same.pass) res.pass = false;
  res.detail = "3 perturbation sizes, worst ratio " + fmt_e(worst_ratio) +
               " (bound 1 + 1e-6), identical-run check " + (same.pass ? "ok" : "failed");
  return res;
}

// ---------------------------------------------------------------------------
// criterion 7: long-time limit against the stationary constrained solve
// ---------------------------------------------------------------------------

CriterionResult criterion_asymptotics(ArtifactWriter* artifacts) {
  CriterionResult res{7, "long-time-stationary-limit", true, ""};
  const DomainSpec dom{1, {1.0}, {32}};
  const EigenBasis basis = build_basis(dom);
  FracOperator op(basis, 0.5, 0.0);

  const GridFunction f(dom, bump(basis, 5.0, 0.3, 0.12).values().array() - 2.0);
  AsymptoticConfig cfg;
  const AsymptoticReport rep =
      asymptotic_limit(GridFunction::zero(dom), f, op, 100.0, 0.1, cfg);

  res.pass = rep.stationary && rep.hs_error <= 1e-3 && rep.above_initial >= -1e-9 &&
             rep.dual_margin >= -1e-7;
  std::ostringstream d;
  d << "stationary at t = " << fmt_e(rep.stop_time) << " (" << rep.steps_taken
    << " steps), distance to the constrained solve " << fmt_e(rep.hs_error)
    << " (tol 1e-3), dual margin " << fmt_e(rep.dual_margin);
  res.detail = d.str();
  if (artifacts) {
    auto csv = artifacts->open_csv("asymptotic.csv",
                                   "stop_time,steps,hs_error,above_initial,dual_margin");
    ArtifactWriter::csv_row(csv, {fmt_g(rep.stop_time), std::to_string(rep.steps_taken),
                                  fmt_g(rep.hs_error), fmt_g(rep.above_initial),
                                  fmt_g(rep.dual_margin)});
  }
  return res;
}

// ---------------------------------------------------------------------------
// criterion 8: extension trace and energy identities
// ---------------------------------------------------------------------------

CriterionResult criterion_extension(std::uint64_t seed, ArtifactWriter* artifacts) {
  CriterionResult res{8, "extension-trace-and-energy", true, ""};
  std::ofstream csv;
  if (artifacts)
    csv = artifacts->open_csv("extension_refinement.csv",
                              "s,m_levels,height,mode_count,trace_rel_error,energy_kappa");

  const DomainSpec dom{1, {1.0}, {32}};
  const EigenBasis basis = build_basis(dom);
  const GridFunction phi1(dom, basis.eigenvectors.col(0));
  const std::vector<int> ladder{32, 64, 128};

  std::ostringstream d;
  double worst_final = 0.0;
  Rng rng(seed);
  for (double s : {0.25, 0.5, 0.75}) {
    const auto rows = extension_refinement_study(basis, s, phi1, ladder);
    for (const RefinementRow& row : rows) {
      if (artifacts)
        ArtifactWriter::csv_row(csv, {fmt_g(row.s), std::to_string(row.m_levels),
                                      fmt_g(row.height), std::to_string(row.mode_count),
                                      fmt_g(row.trace_rel_error), fmt_g(row.energy_kappa)});
    }
    const double final_err = rows.back().trace_rel_error;
    worst_final = std::max(worst_final, final_err);
    if (final_err >= 0.05) res.pass = false;
    for (size_t i = 1; i < rows.size(); ++i)
      if (rows[i].trace_rel_error >= rows[i - 1].trace_rel_error) res.pass = false;
    if (std::abs(rows[2].energy_kappa - rows[1].energy_kappa) >
        std::abs(rows[1].energy_kappa - rows[0].energy_kappa))
      res.pass = false;

    // energy proportionality across random smooth inputs at the finest level
    const ExtensionMesh mesh =
        make_extension_mesh(basis, s, 128, default_height(basis), 1.15);
    double kmin = kInf, kmax = -kInf, ksum = 0.0;
    for (int i = 0; i < 10; ++i) {
      const GridFunction v = random_smooth(basis, rng, 1.0);
      const ExtensionSolution sol = solve_extension(mesh, v);
      const double kappa = verify_energy_identity(sol, mesh, v).kappa;
      kmin = std::min(kmin, kappa);
      kmax = std::max(kmax, kappa);
      ksum += kappa;
    }
    const double spread = (kmax - kmin) / (ksum / 10.0);
    if (spread >= 0.02) res.pass = false;
    d << "s=" << s << ": err " << fmt_e(final_err) << ", kappa spread " << fmt_e(spread) << "; ";
  }

  // semi-analytic check at s = 1/2, where the mode profile is a sinh ratio
  {
    const double s = 0.5;
    const double y_top = default_height(basis);
    const ExtensionMesh mesh = make_extension_mesh(basis, s, 128, y_top, 1.15);
    const ExtensionSolution sol = solve_extension(mesh, phi1);
    const double lam = basis.eigenvalues[0];
    const double exact = std::sqrt(lam) / std::tanh(std::sqrt(lam) * y_top);
    const double rel = std::abs(sol.mode_trace[0] - exact) / exact;
    if (rel >= 0.02) res.pass = false;
    d << "sinh oracle rel err " << fmt_e(rel);
  }
  res.detail = d.str() + "; worst final trace err " + fmt_e(worst_final) + " (tol 5%)";
  return res;
}

// ---------------------------------------------------------------------------
// criteria 9 and 10: chain-rule refinement and interpolant gaps
// ---------------------------------------------------------------------------

struct RefinedRuns {
  std::unique_ptr<EigenBasis> basis;
  std::unique_ptr<FracOperator> op;
  EvolutionState coarse;
  EvolutionState fine;
};

RefinedRuns run_refined_pair() {
  RefinedRuns rr;
  const DomainSpec dom{1, {1.0}, {16}};
  rr.basis = std::make_unique<EigenBasis>(build_basis(dom));
  rr.op = std::make_unique<FracOperator>(*rr.basis, 0.5, 0.0);
  EvolveConfig cfg;
  const TimeSource f = TimeSource::constant(GridFunction::constant(dom, 5.0));
  const GridFunction u0 = GridFunction::zero(dom);
  rr.coarse = evolve(u0, f, TimeGrid::uniform(1.0, 20), *rr.op, cfg);
  rr.fine = evolve(u0, f, TimeGrid::uniform(1.0, 40), *rr.op, cfg);
  return rr;
}

CriterionResult criterion_chain_rule(const RefinedRuns& rr, ArtifactWriter* artifacts) {
  CriterionResult res{9, "chain-rule-refinement", true, ""};
  const ChainRuleReport coarse = chain_rule_check(rr.coarse, *rr.op);
  const ChainRuleReport fine = chain_rule_check(rr.fine, *rr.op);
  const double ratio = fine.max_endpoint_dev / coarse.max_endpoint_dev;
  res.pass = coarse.max_polarization_dev <= 1e-9 && fine.max_polarization_dev <= 1e-9 &&
             ratio >= 0.3 && ratio <= 0.7;
  std::ostringstream d;
  d << "halving tau scales the endpoint defect by " << fmt_e(ratio)
    << " (expected in [0.3, 0.7]); polarization defects " << fmt_e(coarse.max_polarization_dev)
    << " / " << fmt_e(fine.max_polarization_dev);
  res.detail = d.str();
  if (artifacts) {
    auto csv = artifacts->open_csv("chain_rule.csv",
                                   "tau,max_polarization_dev,max_endpoint_dev,c_run");
    ArtifactWriter::csv_row(csv, {fmt_g(rr.coarse.grid.tau_max()),
                                  fmt_g(coarse.max_polarization_dev),
                                  fmt_g(coarse.max_endpoint_dev), fmt_g(coarse.c_run)});
    ArtifactWriter::csv_row(csv, {fmt_g(rr.fine.grid.tau_max()),
                                  fmt_g(fine.max_polarization_dev),
                                  fmt_g(fine.max_endpoint_dev), fmt_g(fine.c_run)});
  }
  return res;
}

CriterionResult criterion_interpolant(const RefinedRuns& rr, ArtifactWriter* artifacts) {
  CriterionResult res{10, "interpolant-gap", true, ""};
  const InterpolantReport coarse = interpolant_gap_check(rr.coarse, *rr.op);
  const InterpolantReport fine = interpolant_gap_check(rr.fine, *rr.op);
  const double cross = two_grid_gap(rr.coarse, rr.fine, *rr.op);
  const double cross_envelope =
      coarse.c_energy * std::sqrt(rr.coarse.grid.tau_max());
  res.pass = coarse.pass && fine.pass && cross <= cross_envelope;
  std::ostringstream d;
  d << "interpolant gaps " << fmt_e(coarse.max_gap) << " <= " << fmt_e(coarse.envelope)
    << " and " << fmt_e(fine.max_gap) << " <= " << fmt_e(fine.envelope)
    << "; two-grid distance " << fmt_e(cross) << " <= " << fmt_e(cross_envelope);
  res.detail = d.str();
  if (artifacts) {
    auto csv = artifacts->open_csv("interpolant.csv",
                                   "tau,max_gap,envelope,two_grid_gap,two_grid_envelope");
    ArtifactWriter::csv_row(csv, {fmt_g(rr.coarse.grid.tau_max()), fmt_g(coarse.max_gap),
                                  fmt_g(coarse.envelope), fmt_g(cross), fmt_g(cross_envelope)});
    ArtifactWriter::csv_row(csv, {fmt_g(rr.fine.grid.tau_max()), fmt_g(fine.max_gap),
                                  fmt_g(fine.envelope), "", ""});
  }
  return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance_suite(std::uint64_t seed, ArtifactWriter* artifacts) {
  std::vector<CriterionResult> results;

  const BatteryOutcome battery = run_obstacle_battery(seed, artifacts);
  {
    CriterionResult r{1, "two-sided-bound-suite", true, ""};
    r.pass = battery.ls_violations == 0 && battery.kkt_violations == 0 &&
             battery.not_converged == 0;
    std::ostringstream d;
    d << battery.instances << " instances, bound violations " << battery.ls_violations
      << ", kkt violations " << battery.kkt_violations << ", worst margins lower "
      << fmt_e(battery.worst_lower) << " upper " << fmt_e(battery.worst_upper);
    r.detail = d.str();
    results.push_back(r);
  }
  {
    CriterionResult r{2, "solver-oracle-agreement", true, ""};
    r.pass = battery.max_solver_gap <= 1e-7;
    r.detail = "max sup distance between sweep and active-set solutions " +
               fmt_e(battery.max_solver_gap) + " (tol 1e-7)";
    results.push_back(r);
  }

  results.push_back(criterion_sign_structure(seed + 1, artifacts));
  results.push_back(criterion_comparisons(seed + 2, artifacts));

  const EvolutionBattery bat = run_evolution_battery(seed + 3);
  results.push_back(criterion_step_laws(bat, artifacts));
  results.push_back(criterion_stability(seed + 4, artifacts));
  results.push_back(criterion_asymptotics(artifacts));
  results.push_back(criterion_extension(seed + 5, artifacts));

  const RefinedRuns rr = run_refined_pair();
  results.push_back(criterion_chain_rule(rr, artifacts));
  results.push_back(criterion_interpolant(rr, artifacts));
  return results;
}

}  // namespace fraclap
