#ifndef HMFLOW_SPECTRAL_HPP
#define HMFLOW_SPECTRAL_HPP

#include <functional>
#include <string>
#include <vector>

#include "quadrature.hpp"

namespace hmflow {

/// Constants of the linearization around the equatorial map in dimension d:
/// omega = sqrt(d^2 - 8d + 8) and gamma the smaller root of
/// a^2 - (d-2)a + (d-1) = 0, i.e. gamma = (d - 2 - omega)/2.
struct SpectralConstants {
  int d = 0;
  double omega = 0.0;
  double gamma = 0.0;
};

SpectralConstants compute_constants(int d);

/// n-th eigenvalue of the linearized operator: lambda_n = -gamma/2 + n.
double eigenvalue(const SpectralConstants& c, int n);

/// Samples of a radial function on a strictly increasing positive grid.
struct RadialProfile {
  enum class Var { r, y, xi };
  Var variable = Var::y;
  std::vector<double> grid;
  std::vector<double> values;
  std::string metadata;

  void validate() const;
};

/// Orthonormal eigenbasis phi_n(y) = N_n y^{-gamma} L_n^{(omega/2)}(y^2/4).
/// Stores the normalization N_n, origin coefficients alpha_n and infinity
/// coefficients beta_n; gamma-ratios go through lgamma so large n does not
/// overflow.
class EigenfunctionBasis {
public:
  static EigenfunctionBasis build(const SpectralConstants& c, int n_max);

  const SpectralConstants& constants() const { return constants_; }
  int n_max() const { return n_max_; }
  double normalization(int n) const { return check(n), norm_[n]; }
  double origin_coeff(int n) const { return check(n), origin_[n]; }
  double infinity_coeff(int n) const { return check(n), infinity_[n]; }

  double eval(int n, double y) const;
  /// phi_n and its first two derivatives by analytic formulas.
  void eval_derivs(int n, double y, double& f, double& df, double& ddf) const;

private:
  void check(int n) const;

  SpectralConstants constants_;
  int n_max_ = 0;
  std::vector<double> norm_, origin_, infinity_;
};

/// Generalized Laguerre polynomial L_n^{(a)}(x) by the ascending
/// three-term recurrence.
double laguerre(int n, double a, double x);

struct QuadOptions {
  int nodes = 200;
  double rel_tol = 1e-10;
  bool check_convergence = true;
};

/// \int_0^inf f(y) rho(y) dy with rho = y^{d-1} e^{-y^2/4}, evaluated after
/// the substitution X = y^2/4 on the generalized Gauss-Laguerre rule with
/// parameter omega/2. Convergence is confirmed by node doubling.
double weighted_integral(const Fn& f, const SpectralConstants& c, const QuadOptions& opt = {});

double inner_product(const Fn& f, const Fn& g, const SpectralConstants& c,
                     const QuadOptions& opt = {});
double inner_product(const RadialProfile& f, const RadialProfile& g, const SpectralConstants& c,
                     const QuadOptions& opt = {});

/// Monotone cubic (PCHIP) interpolant of a profile; evaluates to zero
/// outside the grid range.
Fn interpolant(const RadialProfile& p);

/// A phi = -phi'' - ((d-1)/y - y/2) phi' - (d-1)/y^2 phi sampled on the
/// grid. Derivatives by order-4 centered differences of the callable.
RadialProfile apply_operator(const Fn& f, const SpectralConstants& c,
                             const std::vector<double>& y_grid);
/// Same, with analytic derivatives supplied by the caller.
RadialProfile apply_operator(const Fn& f, const Fn& df, const Fn& ddf, const SpectralConstants& c,
                             const std::vector<double>& y_grid);
/// A phi_n on the grid via the basis' analytic derivatives.
RadialProfile apply_operator(const EigenfunctionBasis& basis, int n,
                             const std::vector<double>& y_grid);

/// LHS - RHS of the Hardy-type inequality
///   int (f')^2 rho + (alpha^2-(d-2)alpha) int f^2/y^2 rho
///     + (alpha/2) int f^2 rho >= 0
/// for a test function supported away from 0 and infinity. A derivative
/// callable may be supplied; otherwise order-4 differences are used.
double hardy_margin(const Fn& f, const SpectralConstants& c, double alpha,
                    const Fn* df = nullptr, const QuadOptions& opt = {});

/// First n_max+1 basis coefficients <f, phi_n>.
std::vector<double> project(const Fn& f, const EigenfunctionBasis& basis, int n_max,
                            const QuadOptions& opt = {});
std::vector<double> project(const RadialProfile& f, const EigenfunctionBasis& basis, int n_max,
                            const QuadOptions& opt = {});

}  // namespace hmflow

#endif
