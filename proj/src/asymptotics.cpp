#include "asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace hmflow {

RatePrediction predict_exponent(int d, int l) {
  if (l < 1) fail(errc::invalid_argument, "mode index l must be >= 1");
  const SpectralConstants c = compute_constants(d);
  RatePrediction p;
  p.d = d;
  p.l = l;
  p.gamma = c.gamma;
  p.lambda_l = eigenvalue(c, l);
  if (std::abs(p.lambda_l) < 1e-14)
    fail(errc::neutral_mode,
         "lambda_l = 0 (d=7, l=1): logarithmic-correction regime, out of scope");
  if (p.lambda_l < 0.0)
    fail(errc::negative_mode, "lambda_l < 0: mode does not drive a blow-up rate");
  p.omega_l = p.lambda_l / p.gamma;
  p.exponent = l / p.gamma;
  return p;
}

double predict_epsilon(double a_l0, double c_l, double h, const RatePrediction& pred, double s) {
  if (!(a_l0 < 0.0)) fail(errc::sign_error, "matching requires a_l(0) < 0");
  if (!(c_l > 0.0) || !(h > 0.0)) fail(errc::invalid_argument, "c_l and h must be positive");
  return std::pow(-a_l0 * c_l / h, 1.0 / pred.gamma) * std::exp(-pred.omega_l * s);
}

namespace {

double origin_coeff_closed_form(const SpectralConstants& c, int n) {
  const double a = 0.5 * c.omega;
  const double lc = (c.gamma - 0.5 * (c.d - 1.0)) * std::log(2.0);
  return std::exp(lc + 0.5 * (std::lgamma(n + 1.0 + a) - std::lgamma(n + 1.0)) -
                  std::lgamma(1.0 + a));
}

}  // namespace

InitialDataSpec InitialDataSpec::make(int d, int l, double s0, std::vector<double> q, double h) {
  InitialDataSpec spec;
  spec.d = d;
  spec.l = l;
  spec.s0 = s0;
  spec.pred = predict_exponent(d, l);
  spec.sigma = std::min(0.24, 0.9 / (10.0 * l));
  const double sigma_lo = spec.sigma / (1.0 - 2.0 * spec.sigma);
  spec.sigma_tilde = 0.5 * (sigma_lo + 0.5);
  spec.q = q.empty() ? std::vector<double>(l, 0.0) : std::move(q);
  spec.K = std::exp(spec.k * spec.pred.omega_l * s0);
  spec.K_tilde = std::exp(spec.k_tilde * spec.pred.omega_l * s0);
  spec.inner_edge = spec.K_tilde * std::exp(-spec.pred.omega_l * s0);
  spec.outer_edge = std::exp(spec.sigma_tilde * s0);
  if (h > 0.0) {
    const SpectralConstants c = compute_constants(d);
    spec.alpha = std::pow(h / origin_coeff_closed_form(c, l), 1.0 / c.gamma);
  }
  return spec;
}

void InitialDataSpec::validate() const {
  if (!(s0 > 0.0)) fail(errc::spec_violation, "s0 must be positive");
  if (!(0.0 < k_tilde && k_tilde < k && k < 1.0))
    fail(errc::spec_violation, "need 0 < k_tilde < k < 1");
  if (!(0.0 < sigma && sigma < 0.5) || !(0.0 < sigma_tilde && sigma_tilde < 0.5))
    fail(errc::spec_violation, "sigma and sigma_tilde must lie in (0, 1/2)");
  if (int(q.size()) != l) fail(errc::spec_violation, "q must have exactly l entries");
  if (!(inner_edge < outer_edge)) fail(errc::spec_violation, "initial-data regions are not ordered");
  if (!(alpha > 0.0)) fail(errc::spec_violation, "inner steepness alpha not derived yet");
  if (strict_regime) {
    if (!(sigma < 1.0 / (10.0 * l)))
      fail(errc::spec_violation, "strict mode requires sigma < 1/(10 l)");
    if (!(sigma < 0.25)) fail(errc::spec_violation, "strict mode requires sigma < 1/4");
    if (!(sigma / (1.0 - 2.0 * sigma) < sigma_tilde))
      fail(errc::spec_violation, "strict mode requires sigma_tilde > sigma/(1-2 sigma)");
  }
}

InitialData::InitialData(InitialDataSpec spec, const EigenfunctionBasis& basis,
                         StationaryProfile u1)
    : spec_(std::move(spec)), basis_(&basis), u1_(std::move(u1)) {
  if (basis.n_max() < spec_.l) fail(errc::invalid_argument, "basis truncation below mode l");
  if (u1_.h_estimate <= 0.0) extract_h(u1_);
  if (spec_.alpha <= 0.0) {
    const SpectralConstants& c = basis.constants();
    spec_.alpha = std::pow(u1_.h_estimate / basis.origin_coeff(spec_.l), 1.0 / c.gamma);
  }
  spec_.validate();
}

double InitialData::eval(double y) const {
  if (!(y >= 0.0)) fail(errc::domain_error, "initial data argument must be nonnegative");
  const auto& sp = spec_;
  if (y < sp.inner_edge) {
    const double xi = sp.alpha * y * std::exp(sp.pred.omega_l * sp.s0);
    return u1_.eval(xi) - M_PI_2;
  }
  double v = sp.a_l0 * std::exp(-sp.pred.lambda_l * sp.s0) * basis_->eval(sp.l, y);
  for (int n = 0; n < sp.l; ++n)
    if (sp.q[n] != 0.0) v += sp.q[n] * basis_->eval(n, y);
  if (y >= sp.outer_edge) v = std::clamp(v, -M_PI_2, M_PI_2);
  return v;
}

RadialProfile InitialData::sample(const std::vector<double>& y_grid) const {
  RadialProfile p;
  p.variable = RadialProfile::Var::y;
  p.grid = y_grid;
  p.values.reserve(y_grid.size());
  for (double y : y_grid) p.values.push_back(eval(y));
  p.metadata = "psi_{0,q} at s0";
  p.validate();
  return p;
}

InitialData build_initial_data(const InitialDataSpec& spec, const EigenfunctionBasis& basis,
                               StationaryProfile u1) {
  return InitialData(spec, basis, std::move(u1));
}

CompositeResult composite_profile(double s, const InitialDataSpec& spec,
                                  const EigenfunctionBasis& basis, const StationaryProfile& u1,
                                  const std::vector<double>& y_grid, double epsilon_override) {
  if (s < spec.s0) fail(errc::invalid_argument, "composite profile needs s >= s0");
  if (u1.h_estimate <= 0.0) fail(errc::invalid_argument, "stationary profile lacks a fitted tail");
  const RatePrediction& pred = spec.pred;
  const double c_l = basis.origin_coeff(spec.l);
  const double eps = (epsilon_override > 0.0)
                         ? epsilon_override
                         : predict_epsilon(spec.a_l0, c_l, u1.h_estimate, pred, s);

  auto f_inn = [&](double y) { return u1.eval(y / eps); };
  auto f_out = [&](double y) {
    return M_PI_2 + spec.a_l0 * std::exp(-pred.lambda_l * s) * basis.eval(spec.l, y);
  };

  // Smooth ramp spanning one decade around the inner-region edge.
  const double y_c = spec.K_tilde * std::exp(-pred.omega_l * s);
  auto blend_weight = [y_c](double y) {
    const double t = std::clamp(std::log10(y / y_c) + 0.5, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
  };

  CompositeResult res;
  res.profile.variable = RadialProfile::Var::y;
  res.profile.grid = y_grid;
  res.profile.values.reserve(y_grid.size());
  for (double y : y_grid) {
    const double w = blend_weight(y);
    res.profile.values.push_back((1.0 - w) * f_inn(y) + w * f_out(y));
  }
  res.profile.metadata = "composite inner/outer approximation";

  // Overlap window: above the boundary layer, below where the rescaled
  // stationary expansion stops being valid (the K e^{-omega_l s} edge).
  const double lo = std::sqrt(eps);
  const double hi = std::min({1.0, std::exp(spec.sigma * s), spec.K * std::exp(-pred.omega_l * s)});
  if (!(lo < hi)) fail(errc::empty_overlap, "inner/outer overlap window is empty");
  double worst = 0.0;
  const int samples = 200;
  for (int i = 0; i < samples; ++i) {
    const double y = lo * std::pow(hi / lo, double(i) / (samples - 1));
    const double out = f_out(y);
    const double denom = M_PI_2 - out;
    if (!(std::abs(denom) > 0.0)) continue;
    worst = std::max(worst, std::abs(f_inn(y) - out) / std::abs(denom));
  }
  res.overlap_mismatch = worst;
  return res;
}

std::vector<double> projection_vector(const Fn& profile, const EigenfunctionBasis& basis, int l,
                                      const QuadOptions& opt) {
  if (l < 1) fail(errc::invalid_argument, "projection needs l >= 1");
  return project(profile, basis, l - 1, opt);
}

}  // namespace hmflow
