#include "fraclap/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace fraclap {

TimeGrid TimeGrid::uniform(double t_end, int steps) {
  if (!(t_end > 0.0) || steps < 1)
    throw std::invalid_argument("time grid: need t_end > 0 and at least one step");
  TimeGrid g;
  g.t.resize(steps + 1);
  for (int k = 0; k <= steps; ++k) g.t[k] = t_end * k / steps;
  g.t[steps] = t_end;
  return g;
}

void TimeGrid::validate() const {
  if (t.size() < 2) throw std::invalid_argument("time grid: need at least one step");
  if (t.front() != 0.0) throw std::invalid_argument("time grid: must start at 0");
  for (size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1]))
      throw std::invalid_argument("time grid: times must increase strictly");
}

double TimeGrid::tau_max() const {
  double m = 0.0;
  for (int k = 1; k <= steps(); ++k) m = std::max(m, tau(k));
  return m;
}

TimeSource TimeSource::constant(GridFunction f) {
  TimeSource s;
  s.kind_ = Kind::constant_in_time;
  s.values_.push_back(std::move(f));
  return s;
}

TimeSource TimeSource::sampled(std::vector<double> times, std::vector<GridFunction> values) {
  if (times.size() != values.size() || times.size() < 2)
    throw std::invalid_argument("source: need matching times and values, at least two samples");
  for (size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1]))
      throw std::invalid_argument("source: sample times must increase strictly");
    if (!(values[i].domain() == values[0].domain()))
      throw std::invalid_argument("source: samples live on different grids");
  }
  TimeSource s;
  s.kind_ = Kind::sampled;
  s.times_ = std::move(times);
  s.values_ = std::move(values);
  return s;
}

TimeSource TimeSource::callable(std::function<GridFunction(double)> fn, double sample_dt) {
  if (!fn) throw std::invalid_argument("source: empty callable");
  if (!(sample_dt > 0.0)) throw std::invalid_argument("source: sample_dt must be positive");
  TimeSource s;
  s.kind_ = Kind::callable;
  s.fn_ = std::move(fn);
  s.sample_dt_ = sample_dt;
  s.values_.push_back(s.fn_(0.0));
  return s;
}

const DomainSpec& TimeSource::domain() const { return values_[0].domain(); }

GridFunction TimeSource::at(double t) const {
  switch (kind_) {
    case Kind::constant_in_time:
      return values_[0];
    case Kind::callable:
      return fn_(t);
    case Kind::sampled:
      break;
  }
  if (t <= times_.front()) return values_.front();
  if (t >= times_.back()) return values_.back();
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const int j = static_cast<int>(it - times_.begin());
  const double w = (t - times_[j - 1]) / (times_[j] - times_[j - 1]);
  return GridFunction(values_[0].domain(),
                      (1.0 - w) * values_[j - 1].values() + w * values_[j].values());
}

std::vector<GridFunction> TimeSource::average(const TimeGrid& grid) const {
  grid.validate();
  const int m = grid.steps();
  std::vector<GridFunction> out;
  out.reserve(m);

  if (kind_ == Kind::constant_in_time) {
    for (int k = 0; k < m; ++k) out.push_back(values_[0]);
    return out;
  }

  if (kind_ == Kind::callable) {
    for (int k = 1; k <= m; ++k) {
      const double a = grid.t[k - 1];
      const double tau = grid.tau(k);
      const int pieces = std::max(1, static_cast<int>(std::ceil(tau / sample_dt_)));
      Vector acc = Vector::Zero(values_[0].size());
      GridFunction prev = fn_(a);
      for (int p = 1; p <= pieces; ++p) {
        GridFunction next = fn_(a + tau * p / pieces);
        acc += (tau / pieces) * 0.5 * (prev.values() + next.values());
        prev = std::move(next);
      }
      out.push_back(GridFunction(values_[0].domain(), acc / tau));
    }
    return out;
  }

  // Sampled data: the sampling mesh must not be coarser than the step mesh,
  // and must cover the whole horizon.
  double min_tau = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= m; ++k) min_tau = std::min(min_tau, grid.tau(k));
  double max_gap = 0.0;
  for (size_t i = 1; i < times_.size(); ++i)
    max_gap = std::max(max_gap, times_[i] - times_[i - 1]);
  if (max_gap > min_tau * (1.0 + 1e-12))
    throw std::invalid_argument("source: sampling mesh is coarser than the step mesh");
  const double end_slack = 1e-12 * std::max(1.0, grid.horizon());
  if (times_.front() > end_slack || times_.back() < grid.horizon() - end_slack)
    throw std::invalid_argument("source: samples do not cover the time horizon");

  for (int k = 1; k <= m; ++k) {
    const double a = grid.t[k - 1];
    const double b = grid.t[k];
    // Exact integral of the piecewise-linear interpolant over [a, b].
    std::vector<double> cuts{a};
    for (double ts : times_)
      if (ts > a && ts < b) cuts.push_back(ts);
    cuts.push_back(b);
    Vector acc = Vector::Zero(values_[0].size());
    GridFunction left = at(cuts[0]);
    for (size_t c = 1; c < cuts.size(); ++c) {
      GridFunction right = at(cuts[c]);
      acc += (cuts[c] - cuts[c - 1]) * 0.5 * (left.values() + right.values());
      left = std::move(right);
    }
    out.push_back(GridFunction(values_[0].domain(), acc / (b - a)));
  }
  return out;
}

std::vector<GridFunction> average_source(const TimeSource& source, const TimeGrid& grid) {
  return source.average(grid);
}

StepResult euler_step(const GridFunction& u_prev, const GridFunction& f_k, double tau,
                      const FracOperator& op_s, const SolverConfig& cfg,
                      const FracOperator* op_shifted) {
  if (!(tau > 0.0)) throw std::invalid_argument("step: tau must be positive");
  if (op_s.shift() != 0.0)
    throw std::invalid_argument("step: the diffusion operator must carry no shift");
  const EigenBasis& basis = op_s.basis();
  if (!(u_prev.domain() == basis.domain) || !(f_k.domain() == basis.domain))
    throw std::invalid_argument("step: state and source must live on the operator grid");

  std::unique_ptr<FracOperator> local;
  if (!op_shifted) {
    local = std::make_unique<FracOperator>(basis, op_s.s(), 1.0 / tau);
    op_shifted = local.get();
  }

  const GridFunction force(basis.domain, f_k.values() + u_prev.values() / tau);
  ObstacleProblem prob(*op_shifted, force, u_prev);
  const VISolution sol = (op_s.size() <= cfg.oracle_cap) ? solve_vi_active_set(prob, cfg)
                                                         : solve_vi_psor(prob, cfg);
  if (!sol.converged)
    throw std::runtime_error("step: inner constrained solve did not converge");

  StepResult r;
  r.u = sol.u;
  const Vector rate = (sol.u.values() - u_prev.values()) / tau;
  const GridFunction au = op_s.apply(sol.u);
  r.g = GridFunction(basis.domain, rate + au.values() - f_k.values());
  r.monotone_margin = (sol.u.values() - u_prev.values()).minCoeff();
  r.g_min = r.g.values().minCoeff();
  r.pairing = l2_inner(basis, r.g, GridFunction(basis.domain, sol.u.values() - u_prev.values()));
  r.euler_residual =
      (rate - (f_k.values() - au.values()).cwiseMax(0.0)).cwiseAbs().maxCoeff();
  const Vector cap = (op_s.apply(u_prev).values() - f_k.values()).cwiseMax(0.0);
  r.bound_margin = (cap - r.g.values()).minCoeff();
  r.vi_iterations = sol.iterations;
  return r;
}

double EvolutionState::worst_monotone() const {
  return monotone_margin.empty() ? 0.0
                                 : *std::min_element(monotone_margin.begin(), monotone_margin.end());
}
double EvolutionState::worst_g_min() const {
  return g_min.empty() ? 0.0 : *std::min_element(g_min.begin(), g_min.end());
}
double EvolutionState::worst_pairing() const {
  double w = 0.0;
  for (double p : pairing) w = std::max(w, std::abs(p));
  return w;
}
double EvolutionState::worst_euler_residual() const {
  return euler_residual.empty() ? 0.0
                                : *std::max_element(euler_residual.begin(), euler_residual.end());
}
double EvolutionState::worst_bound_margin() const {
  return bound_margin.empty() ? 0.0
                              : *std::min_element(bound_margin.begin(), bound_margin.end());
}
double EvolutionState::worst_energy_slack() const {
  return energy_slack.empty() ? 0.0
                              : *std::min_element(energy_slack.begin(), energy_slack.end());
}

EvolutionState evolve(const GridFunction& u0, const TimeSource& f, const TimeGrid& grid,
                      const FracOperator& op_s, const EvolveConfig& cfg) {
  grid.validate();
  if (op_s.shift() != 0.0)
    throw std::invalid_argument("evolve: the diffusion operator must carry no shift");
  const EigenBasis& basis = op_s.basis();
  if (!(u0.domain() == basis.domain))
    throw std::invalid_argument("evolve: initial state does not live on the operator grid");

  EvolutionState st;
  st.grid = grid;
  st.s = op_s.s();
  st.step_sources = f.average(grid);
  const int m = grid.steps();

  st.force_limit_margin = 0.0;
  if (cfg.force_limit) {
    if (!(cfg.force_limit->domain() == basis.domain))
      throw std::invalid_argument("evolve: force limit does not live on the operator grid");
    double margin = std::numeric_limits<double>::infinity();
    for (const GridFunction& fk : st.step_sources)
      margin = std::min(margin, (cfg.force_limit->values() - fk.values()).minCoeff());
    st.force_limit_margin = margin;
  }

  st.snapshots.reserve(m + 1);
  st.snapshots.push_back(u0);
  const double hs0 = hs_norm(basis, op_s.s(), u0);
  st.hs_energy_sq.push_back(hs0 * hs0);

  std::map<double, std::unique_ptr<FracOperator>> shifted;
  double energy_budget = st.hs_energy_sq[0];
  for (int k = 1; k <= m; ++k) {
    const double tau = grid.tau(k);
    auto it = shifted.find(tau);
    if (it == shifted.end())
      it = shifted.emplace(tau, std::make_unique<FracOperator>(basis, op_s.s(), 1.0 / tau)).first;

    StepResult r;
    try {
      r = euler_step(st.snapshots.back(), st.step_sources[k - 1], tau, op_s, cfg.vi,
                     it->second.get());
    } catch (const std::exception& e) {
      throw std::runtime_error("evolve: step " + std::to_string(k) + " failed: " + e.what());
    }
    const double law = cfg.law_tol;
    if (r.monotone_margin < -law || r.g_min < -law || std::abs(r.pairing) > law ||
        r.euler_residual > law)
      throw std::runtime_error("evolve: step " + std::to_string(k) +
                               " violates the one-sided step laws");

    const double rate_sq =
        std::pow(l2_norm(basis, GridFunction(basis.domain,
                                             (r.u.values() - st.snapshots.back().values()) / tau)),
                 2);
    const double hs_k = hs_norm(basis, op_s.s(), r.u);

    st.snapshots.push_back(r.u);
    st.defects.push_back(r.g);
    st.hs_energy_sq.push_back(hs_k * hs_k);
    st.rate_l2_sq.push_back(rate_sq);
    st.monotone_margin.push_back(r.monotone_margin);
    st.g_min.push_back(r.g_min);
    st.pairing.push_back(r.pairing);
    st.euler_residual.push_back(r.euler_residual);
    st.bound_margin.push_back(r.bound_margin);

    const double fk_norm = l2_norm(basis, st.step_sources[k - 1]);
    energy_budget += tau * fk_norm * fk_norm;
    double spent = st.hs_energy_sq[k];
    for (int j = 0; j < k; ++j) spent += grid.tau(j + 1) * st.rate_l2_sq[j];
    st.energy_slack.push_back(energy_budget - spent);
  }
  return st;
}

StabilityReport stability_check(const EvolutionState& run1, const EvolutionState& run2,
                                const FracOperator& op_s, double tol) {
  if (run1.grid.t != run2.grid.t)
    throw std::invalid_argument("stability: runs use different time grids");
  if (run1.snapshots[0].domain() != op_s.basis().domain ||
      run2.snapshots[0].domain() != op_s.basis().domain)
    throw std::invalid_argument("stability: runs do not live on the operator grid");

  const EigenBasis& basis = op_s.basis();
  const int m = run1.grid.steps();
  double rate_term = 0.0;
  double sup_term = 0.0;
  double source_term = 0.0;
  for (int k = 0; k <= m; ++k) {
    const GridFunction diff(basis.domain,
                            run1.snapshots[k].values() - run2.snapshots[k].values());
    const double hs = hs_norm(basis, op_s.s(), diff);
    sup_term = std::max(sup_term, hs * hs);
    if (k == 0) continue;
    const double tau = run1.grid.tau(k);
    const GridFunction rate_diff(
        basis.domain, ((run1.snapshots[k].values() - run1.snapshots[k - 1].values()) -
                       (run2.snapshots[k].values() - run2.snapshots[k - 1].values())) /
                          tau);
    const double rd = l2_norm(basis, rate_diff);
    rate_term += tau * rd * rd;
    const double fd = l2_norm(basis, GridFunction(basis.domain,
                                                  run1.step_sources[k - 1].values() -
                                                      run2.step_sources[k - 1].values()));
    source_term += tau * fd * fd;
  }
  const GridFunction d0(basis.domain,
                        run1.snapshots[0].values() - run2.snapshots[0].values());
  const double hs0 = hs_norm(basis, op_s.s(), d0);

  StabilityReport rep;
  rep.lhs_sq = rate_term + sup_term;
  rep.rhs_sq = 2.0 * (hs0 * hs0 + source_term);
  if (rep.rhs_sq > 0.0) {
    rep.ratio = rep.lhs_sq / rep.rhs_sq;
    rep.pass = rep.ratio <= 1.0 + tol;
  } else {
    rep.ratio = 0.0;
    rep.pass = rep.lhs_sq <= tol;
  }
  return rep;
}

ChainRuleReport chain_rule_check(const EvolutionState& run, const FracOperator& op_s) {
  const EigenBasis& basis = op_s.basis();
  ChainRuleReport rep;
  rep.tau_max = run.grid.tau_max();
  for (int k = 1; k <= run.grid.steps(); ++k) {
    const double tau = run.grid.tau(k);
    const Vector du = run.snapshots[k].values() - run.snapshots[k - 1].values();
    const GridFunction mid(basis.domain,
                           0.5 * (run.snapshots[k].values() + run.snapshots[k - 1].values()));
    const double delta_sq = run.hs_energy_sq[k] - run.hs_energy_sq[k - 1];
    const double polar = 2.0 * l2_inner(basis, GridFunction(basis.domain, du), op_s.apply(mid));
    rep.max_polarization_dev = std::max(rep.max_polarization_dev, std::abs(delta_sq - polar));

    const double endpoint =
        2.0 * l2_inner(basis, GridFunction(basis.domain, du / tau),
                       op_s.apply(run.snapshots[k]));
    rep.max_endpoint_dev = std::max(rep.max_endpoint_dev, std::abs(delta_sq / tau - endpoint));
  }
  rep.c_run = (rep.tau_max > 0.0) ? rep.max_endpoint_dev / rep.tau_max : 0.0;
  return rep;
}

EvolutionOrderingReport comparison_evolution(const GridFunction& u01, const TimeSource& f1,
                                             const GridFunction& u02, const TimeSource& f2,
                                             const TimeGrid& grid, const FracOperator& op_s,
                                             const EvolveConfig& cfg, double tol) {
  if ((u02.values() - u01.values()).minCoeff() < 0.0)
    throw std::invalid_argument("evolution compare: initial states are not ordered");
  const auto fk1 = f1.average(grid);
  const auto fk2 = f2.average(grid);
  for (size_t k = 0; k < fk1.size(); ++k)
    if ((fk2[k].values() - fk1[k].values()).minCoeff() < 0.0)
      throw std::invalid_argument("evolution compare: sources are not ordered at step " +
                                  std::to_string(k + 1));

  const EvolutionState r1 = evolve(u01, f1, grid, op_s, cfg);
  const EvolutionState r2 = evolve(u02, f2, grid, op_s, cfg);
  EvolutionOrderingReport rep;
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= grid.steps(); ++k) {
    const Vector gap = r2.snapshots[k].values() - r1.snapshots[k].values();
    rep.min_gap = std::min(rep.min_gap, gap.minCoeff());
    rep.violations += static_cast<int>((gap.array() < -tol).count());
  }
  return rep;
}

AsymptoticReport asymptotic_limit(const GridFunction& u0, const GridFunction& f_inf,
                                  const FracOperator& op_s, double horizon, double step,
                                  const AsymptoticConfig& cfg) {
  if (!(horizon > 0.0) || !(step > 0.0) || !(step <= horizon))
    throw std::invalid_argument("asymptotic: need 0 < step <= horizon");
  if (op_s.shift() != 0.0)
    throw std::invalid_argument("asymptotic: the diffusion operator must carry no shift");
  const EigenBasis& basis = op_s.basis();

  AsymptoticReport rep;
  rep.run.s = op_s.s();
  rep.run.grid.t.push_back(0.0);
  rep.run.snapshots.push_back(u0);
  const double hs0 = hs_norm(basis, op_s.s(), u0);
  rep.run.hs_energy_sq.push_back(hs0 * hs0);

  FracOperator shifted(basis, op_s.s(), 1.0 / step);
  double t = 0.0;
  while (t < horizon - 1e-12 * horizon) {
    const StepResult r = euler_step(rep.run.snapshots.back(), f_inf, step, op_s, cfg.vi, &shifted);
    t += step;
    const double move = (r.u.values() - rep.run.snapshots.back().values()).cwiseAbs().maxCoeff();
    const double rate = l2_norm(basis, GridFunction(basis.domain,
                                                    (r.u.values() -
                                                     rep.run.snapshots.back().values()) /
                                                        step));
    rep.run.rate_l2_sq.push_back(rate * rate);

    rep.run.grid.t.push_back(t);
    rep.run.step_sources.push_back(f_inf);
    rep.run.snapshots.push_back(r.u);
    rep.run.defects.push_back(r.g);
    const double hs = hs_norm(basis, op_s.s(), r.u);
    rep.run.hs_energy_sq.push_back(hs * hs);
    rep.run.monotone_margin.push_back(r.monotone_margin);
    rep.run.g_min.push_back(r.g_min);
    rep.run.pairing.push_back(r.pairing);
    rep.run.euler_residual.push_back(r.euler_residual);
    rep.run.bound_margin.push_back(r.bound_margin);
    ++rep.steps_taken;
    if (move / step < cfg.stop_tol) {
      rep.stationary = true;
      break;
    }
  }
  rep.stop_time = t;

  ObstacleProblem limit_prob(op_s, f_inf, u0);
  rep.limit = (op_s.size() <= cfg.vi.oracle_cap) ? solve_vi_active_set(limit_prob, cfg.vi)
                                                 : solve_vi_psor(limit_prob, cfg.vi);
  const GridFunction& uf = rep.run.snapshots.back();
  rep.hs_error = hs_norm(basis, op_s.s(),
                         GridFunction(basis.domain, uf.values() - rep.limit.u.values()));
  rep.above_initial = (uf.values() - u0.values()).minCoeff();
  rep.dual_margin = (op_s.apply(uf).values() - f_inf.values()).minCoeff();
  return rep;
}

InterpolantReport interpolant_gap_check(const EvolutionState& run, const FracOperator& op_s) {
  const EigenBasis& basis = op_s.basis();
  InterpolantReport rep;
  double budget = run.hs_energy_sq[0];
  for (int k = 1; k <= run.grid.steps(); ++k) {
    const double fk = l2_norm(basis, run.step_sources[k - 1]);
    budget += run.grid.tau(k) * fk * fk;
    const GridFunction du(basis.domain,
                          run.snapshots[k].values() - run.snapshots[k - 1].values());
    rep.max_gap = std::max(rep.max_gap, l2_norm(basis, du));
  }
  rep.c_energy = std::sqrt(budget);
  rep.envelope = rep.c_energy * std::sqrt(run.grid.tau_max());
  rep.pass = rep.max_gap <= rep.envelope * (1.0 + 1e-10);
  return rep;
}

double two_grid_gap(const EvolutionState& coarse, const EvolutionState& fine,
                    const FracOperator& op_s) {
  const EigenBasis& basis = op_s.basis();
  const double slack = 1e-10 * std::max(1.0, coarse.grid.horizon());
  double gap = 0.0;
  for (size_t k = 0; k < coarse.grid.t.size(); ++k) {
    const double tk = coarse.grid.t[k];
    const auto it = std::lower_bound(fine.grid.t.begin(), fine.grid.t.end(), tk - slack);
    if (it == fine.grid.t.end() || std::abs(*it - tk) > slack)
      throw std::invalid_argument("two-grid gap: coarse times must appear in the fine grid");
    const size_t j = static_cast<size_t>(it - fine.grid.t.begin());
    const GridFunction d(basis.domain,
                         coarse.snapshots[k].values() - fine.snapshots[j].values());
    gap = std::max(gap, l2_norm(basis, d));
  }
  return gap;
}

}  // namespace fraclap
