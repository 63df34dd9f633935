#pragma once

#include <vector>

#include "hardy/core.hpp"
#include "hardy/fit.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/radial_function.hpp"

namespace hardy {

struct SolverOptions {
  QuadratureSpec quad{1e-11, 1e-15};
  /// Largest relative ODE residual accepted on the probe grid.
  double residual_tol = 1e-6;
  int probe_points = 24;
};

struct RadialSolution {
  RadialFunction profile;
  double k = 0.0;
  double boundary_value = 0.0;
  int mode = 0;
  double residual_norm = 0.0;
  /// Parameters of the operator actually solved (mode-shifted, or the dual).
  HardyParams params;
  double inner_radius = 0.0;
  double outer_radius = 1.0;
};

/// -u'' - (N-1)u'/r + mu_eff u/r^2 = f on (0,R), u(R) = 0, u/Phi_{mu_eff} -> k,
/// with mu_eff = mu + l(l+N-2). Throws NoSolutionError when f is not
/// integrable against the weighted measure.
RadialSolution solve_radial_bvp(const HardyParams& p, int l, const RadialFunction& f, double R,
                                double k, const SolverOptions& opts = {});

/// -xi'' - (N~-1)xi'/r = g on (0,R), xi(R) = 0, xi bounded at 0.
RadialSolution solve_dual_radial(const HardyParams& p, const RadialFunction& g, double R,
                                 const SolverOptions& opts = {});

/// Two-point problem on [a,R] with u(a) = inner_bc and u(R) = 0.
RadialSolution solve_annulus(const HardyParams& p, const RadialFunction& f, double a, double R,
                             double inner_bc, const SolverOptions& opts = {});

/// Radial mollifier n^N eta0(n r) scaled to unit Lebesgue mass.
RadialFunction unit_mollifier(int dim, int n);

/// Solution of L_mu w = delta_n in the weighted sense, i.e. with right-hand
/// side delta_n / Gamma_mu, zero boundary value and k = 0.
RadialSolution approximate_green_mollifier(const HardyParams& p, double R, int n,
                                           const SolverOptions& opts = {});

struct ExtractionGrid {
  double r0 = 0.1;  // relative to the outer radius
  double q = 0.5;
  int levels = 20;
};

struct SingularityEstimate {
  double k = 0.0;
  double error = 0.0;
  std::vector<double> radii;
  std::vector<double> ratios;  // profile / Phi along the grid
};

/// Limit of profile / Phi_{mu_eff} at the origin. Throws NoLimit when the
/// ratio oscillates without settling.
SingularityEstimate extract_singularity_coefficient(const RadialSolution& sol, const HardyParams& p,
                                                    const ExtractionGrid& grid = {});

}  // namespace hardy
