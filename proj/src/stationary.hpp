#ifndef HMFLOW_STATIONARY_HPP
#define HMFLOW_STATIONARY_HPP

#include <vector>

#include "spectral.hpp"

namespace hmflow {

struct ShootOptions {
  double xi_start = 1e-4;      // series handoff point
  double rel_tol = 1e-10;      // integrator tolerance
  double abs_tol = 1e-12;
  int points_per_decade = 256;
  double series_tol = 1e-10;   // admissible series remainder at xi_start
};

/// Solution U_alpha of U'' + (d-1)/xi U' - (d-1)/(2 xi^2) sin(2U) = 0 with
/// U(0)=0, U'(0)=alpha, integrated from a cubic series start. Tail behaves
/// as U = pi/2 - h alpha^{-gamma} xi^{-gamma} + O(xi^{-gamma-2}); the fit
/// fields hold the measured plateau of (pi/2 - U) xi^gamma for this alpha.
struct StationaryProfile {
  SpectralConstants constants;
  double alpha = 1.0;
  std::vector<double> xi, u, du;
  double h_estimate = 0.0;     // plateau for this alpha, i.e. h(d) * alpha^{-gamma}
  double h_correction = 0.0;   // xi^{-2} coefficient from the fit
  double fit_window_lo = 0.0, fit_window_hi = 0.0;
  double fit_residual = 0.0;

  double eval(double xi) const;        // series below xi_min, tail fit above xi_max
  double eval_deriv(double xi) const;
  double series_c3() const;
};

StationaryProfile solve_stationary(const SpectralConstants& c, double alpha, double xi_max,
                                   const ShootOptions& opt = {});

/// Fits (pi/2 - U) xi^gamma = h + c xi^{-2} over [xi_max/10, xi_max] and
/// stores the result in the profile. Requires a positive stable plateau.
double extract_h(StationaryProfile& profile);

/// Sub-solution correction profile q >= 0 solving
///   q'' + (d-1)/xi q' - (d-1)/xi^2 cos(2U) q = (beta + 1/2 + omega_l) xi U'
/// with q(0)=q'(0)=0, built from the nested-integral representation that
/// makes positivity manifest. U is the supplied stationary profile
/// (alpha * delta in the construction; delta recorded for provenance).
struct QProfile {
  std::vector<double> xi, q;
  double beta = 0.0;
  double delta = 1.0;
  double omega_l = 0.0;

  /// Log-log slope of q over the last decade of the grid.
  double tail_slope() const;
};

QProfile solve_q_profile(const StationaryProfile& u_profile, double beta, double omega_l,
                         double delta = 1.0);

/// Independent route: integrates the same equation as an IVP from a series
/// start, coupled with the stationary ODE. Used as a cross-check oracle.
QProfile solve_q_profile_ivp(const SpectralConstants& c, double alpha_delta, double beta,
                             double omega_l, double xi_max, const ShootOptions& opt = {});

}  // namespace hmflow

#endif
