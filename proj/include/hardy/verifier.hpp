#pragma once

#include <span>
#include <string>
#include <vector>

#include "hardy/core.hpp"
#include "hardy/quadrature.hpp"
#include "hardy/radial_solver.hpp"
#include "hardy/test_function.hpp"

namespace hardy {

struct VerifySpec {
  QuadratureSpec quad{1e-12, 1e-16};
  /// Evaluate the dual operator by central differences instead of jets.
  bool finite_difference = false;
  double rel_tol = 1e-6;
  double abs_floor = 1e-12;
};

struct IdentityResidual {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  double quadrature_error_budget = 0.0;

  bool within(const VerifySpec& spec) const;
  /// Outside tolerance and not explained by the quadrature budget.
  bool violation(const VerifySpec& spec) const;
};

/// int Phi_mu L*xi dmu against c_mu xi(0), over R^N.
IdentityResidual verify_fundamental_identity(const HardyParams& p, const TestFunction& xi,
                                             const VerifySpec& spec = {});

/// Same with Phi_mu replaced by the Dirichlet solution G_mu on B_R.
IdentityResidual verify_green_identity(const HardyParams& p, double R, const TestFunction& xi,
                                       const VerifySpec& spec = {});

/// int u L*xi dmu against int f xi dmu + c_mu k xi(0) for every xi. Test
/// functions must be centered and supported in the ball of sol.
std::vector<IdentityResidual> verify_weak_solution(const HardyParams& p, const RadialSolution& sol,
                                                   const RadialFunction& f, double k,
                                                   std::span<const TestFunction> xis,
                                                   const VerifySpec& spec = {});

struct InequalityReport {
  /// int |u| L*xi dmu <= int sign(u) f xi dmu.
  double lhs_abs = 0.0;
  double rhs_abs = 0.0;
  /// int u+ L*xi dmu <= int sign+(u) f xi dmu.
  double lhs_plus = 0.0;
  double rhs_plus = 0.0;
  double budget = 0.0;

  double slack_abs() const { return rhs_abs - lhs_abs; }
  double slack_plus() const { return rhs_plus - lhs_plus; }
  bool holds() const { return slack_abs() >= -budget && slack_plus() >= -budget; }
};

/// Kato inequalities for a solution with k = 0; xi must be nonnegative.
InequalityReport check_kato(const HardyParams& p, const RadialSolution& sol, const RadialFunction& f,
                            const TestFunction& xi, const VerifySpec& spec = {});

struct Classification {
  double k_hat = 0.0;
  double k_error = 0.0;
  /// sup over the probe grid of |u - k_hat G_mu - G_mu[f]|.
  double decomposition_residual = 0.0;
};

/// Splits a radial solution into k G_mu plus the Green potential of f. The
/// probe grid is geometric on [0.1R, R). Throws NoLimit when u / Phi_mu oscillates.
/// Signed solutions are accepted; the decomposition is linear in (u, f).
Classification classify_solution(const HardyParams& p, const RadialSolution& sol, const RadialFunction& f,
                                 const VerifySpec& spec = {});

struct DiracOrderReport {
  std::vector<double> eps;
  /// int u L*xi_eps dmu - int f xi_eps dmu; constant c_mu k xi(0) for a solution.
  std::vector<double> functional;
  /// sup|L*xi_eps| int_{B_eps} |u| dmu + sup|xi| int_{B_eps} |f| dmu.
  std::vector<double> majorant;
};

/// Shrinking bumps xi(x / eps) tested against a solution on its ball.
DiracOrderReport dirac_order_check(const HardyParams& p, const RadialSolution& sol, const RadialFunction& f,
                                   const TestFunction& xi, std::span<const double> eps,
                                   const VerifySpec& spec = {});

struct SweepRow {
  int dim = 0;
  double mu = 0.0;
  std::string identity;  // "fundamental" or "green"
  IdentityResidual residual;
};

/// Fundamental and Green identities for every parameter set and library
/// member, on the unit ball.
std::vector<SweepRow> identity_sweep(std::span<const HardyParams> params, std::span<const TestFunction> library,
                                     const VerifySpec& spec = {});

/// mu0, mu0 + 0.5, 0, 1, 5 for dimension N.
std::vector<double> default_mu_grid(int dim);

}  // namespace hardy
