#ifndef HMFLOW_ASYMPTOTICS_HPP
#define HMFLOW_ASYMPTOTICS_HPP

#include <vector>

#include "spectral.hpp"
#include "stationary.hpp"

namespace hmflow {

/// Blow-up rate R(t) ~ (T-t)^p predicted for mode l in dimension d:
/// p = l/gamma = 1/2 + lambda_l/gamma, valid only for lambda_l > 0.
struct RatePrediction {
  int d = 0, l = 0;
  double gamma = 0.0;
  double lambda_l = 0.0;
  double omega_l = 0.0;  // lambda_l / gamma
  double exponent = 0.0; // l / gamma
};

RatePrediction predict_exponent(int d, int l);

/// Boundary-layer width from the inner/outer matching:
/// eps(s) = (-a_l0 c_l / h)^{1/gamma} e^{-omega_l s}, requiring a_l0 < 0.
double predict_epsilon(double a_l0, double c_l, double h, const RatePrediction& pred, double s);

/// Parameters of the three-region initial data psi_{0,q}.
struct InitialDataSpec {
  int d = 0, l = 0;
  double s0 = 0.0;
  double k = 0.9, k_tilde = 0.45;
  double sigma = 0.0, sigma_tilde = 0.0;  // 0 -> defaults derived in make()
  std::vector<double> q;                  // l entries, lower-mode amplitudes
  double a_l0 = -1.0;
  bool strict_regime = false;  // enforce the narrower analytic parameter window

  // derived
  RatePrediction pred;
  double alpha = 0.0;    // inner-profile steepness fixed by the matching
  double K = 0.0, K_tilde = 0.0;
  double inner_edge = 0.0;  // K_tilde e^{-omega_l s0}
  double outer_edge = 0.0;  // e^{sigma_tilde s0}

  static InitialDataSpec make(int d, int l, double s0, std::vector<double> q = {},
                              double h = 0.0);  // h <= 0: solve for it internally
  void validate() const;
};

/// Callable form of psi_{0,q}(y): rescaled stationary profile below the
/// inner edge, mode combination in the intermediate region, the same
/// formula clamped to [-pi/2, pi/2] outside.
class InitialData {
public:
  InitialData(InitialDataSpec spec, const EigenfunctionBasis& basis, StationaryProfile u1);

  double eval(double y) const;
  RadialProfile sample(const std::vector<double>& y_grid) const;
  const InitialDataSpec& spec() const { return spec_; }
  const StationaryProfile& stationary() const { return u1_; }

private:
  InitialDataSpec spec_;
  const EigenfunctionBasis* basis_;
  StationaryProfile u1_;  // alpha = 1 reference profile with fitted tail
};

InitialData build_initial_data(const InitialDataSpec& spec, const EigenfunctionBasis& basis,
                               StationaryProfile u1);

struct CompositeResult {
  RadialProfile profile;
  double overlap_mismatch = 0.0;  // max relative inner/outer disagreement
};

/// Blended inner/outer approximation at similarity time s, with the
/// maximum relative mismatch over the overlap window
/// [sqrt(eps(s)), min(1, e^{sigma s})].
CompositeResult composite_profile(double s, const InitialDataSpec& spec,
                                  const EigenfunctionBasis& basis, const StationaryProfile& u1,
                                  const std::vector<double>& y_grid,
                                  double epsilon_override = 0.0);

/// The map P: first l basis coefficients of a profile slice.
std::vector<double> projection_vector(const Fn& profile, const EigenfunctionBasis& basis, int l,
                                      const QuadOptions& opt = {});

}  // namespace hmflow

#endif
