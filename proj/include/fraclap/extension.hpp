#pragma once

#include "fraclap/frac_operator.hpp"

namespace fraclap {

/// Truncated half-cylinder: the base grid crossed with (0, Y) in the
/// extension coordinate, meshed geometrically toward y = 0 so the degenerate
/// weight y^{1-2s} is resolved where the trace is read off.
struct ExtensionMesh {
  const EigenBasis* base = nullptr;
  double s = 0.0;
  std::vector<double> y;  // y[0] = 0 < ... < y[M] = Y

  int levels() const { return static_cast<int>(y.size()) - 1; }
  double height() const { return y.back(); }
};

/// Geometric mesh with M cells, ratio `grading` in (1,2], height Y.
ExtensionMesh make_extension_mesh(const EigenBasis& base, double s, int m_levels, double height,
                                  double grading = 1.15);

/// Default truncation height 12 / sqrt(lambda_1), long past the slowest
/// mode's decay scale.
double default_height(const EigenBasis& base, double height_factor = 12.0);

/// Trace normalization Gamma(1-s) / (4^{s-1/2} Gamma(s)); equals 1 at s=1/2.
double trace_constant(double s);

struct ExtensionSolution {
  Matrix v;                  // N x (M+1) cylinder values, column i at y_i
  Vector mode_trace;         // per-mode weighted flux at y = 0
  Vector mode_energy;        // per-mode weighted Dirichlet energy
  GridFunction neumann_trace;
  double energy = 0.0;
};

/// Mode-decoupled solve of the weighted equation (y^{1-2s} theta')' =
/// lambda_k y^{1-2s} theta with theta(0) = v_k, theta(Y) = 0. Face
/// conductances use the exact harmonic integral of the weight so the flux
/// stays accurate across the degenerate first cell; the trace is the
/// first-face flux of the solve.
ExtensionSolution solve_extension(const ExtensionMesh& mesh, const GridFunction& v);

/// Discrete energy of an arbitrary cylinder function with the same quadratic
/// form the solver minimizes (columns 0 and M held as boundary data).
double extension_energy(const ExtensionMesh& mesh, const Matrix& v);

/// Relative L2 distance between the assembled trace and c_s (-Delta)^s v.
struct TraceIdentityReport {
  double rel_error = 0.0;
  double trace_norm = 0.0;
  double reference_norm = 0.0;
};

TraceIdentityReport verify_trace_identity(const ExtensionSolution& sol, const FracOperator& op_s,
                                          const GridFunction& v);

/// Proportionality factor between cylinder energy and the squared spectral
/// seminorm of the trace datum.
struct EnergyIdentityReport {
  double kappa = 0.0;
  double energy = 0.0;
  double hs_sq = 0.0;
};

EnergyIdentityReport verify_energy_identity(const ExtensionSolution& sol,
                                            const ExtensionMesh& mesh, const GridFunction& v);

struct RefinementRow {
  int m_levels = 0;
  double height = 0.0;
  double s = 0.0;
  int mode_count = 0;
  double trace_rel_error = 0.0;
  double energy_kappa = 0.0;
};

/// Trace/energy behaviour across a ladder of mesh resolutions.
std::vector<RefinementRow> extension_refinement_study(const EigenBasis& base, double s,
                                                      const GridFunction& v,
                                                      const std::vector<int>& m_list,
                                                      double height_factor = 12.0,
                                                      double grading = 1.15);

}  // namespace fraclap
