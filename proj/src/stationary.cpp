#include "stationary.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "errors.hpp"

namespace hmflow {

namespace odeint = boost::numeric::odeint;

namespace {

std::vector<double> log_grid(double lo, double hi, int points_per_decade) {
  const int n = std::max(2, int(std::ceil(points_per_decade * std::log10(hi / lo))) + 1);
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  g.front() = lo;
  g.back() = hi;
  return g;
}

// Cubic Hermite on a bracketing cell of a log grid.
double hermite(const std::vector<double>& x, const std::vector<double>& f,
               const std::vector<double>& df, double t, bool derivative) {
  auto it = std::upper_bound(x.begin(), x.end(), t);
  std::size_t i = (it == x.begin()) ? 0 : (it - x.begin() - 1);
  if (i >= x.size() - 1) i = x.size() - 2;
  const double h = x[i + 1] - x[i];
  const double s = (t - x[i]) / h;
  const double s2 = s * s;
  if (!derivative) {
    const double s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * f[i] + (s3 - 2 * s2 + s) * h * df[i] +
           (-2 * s3 + 3 * s2) * f[i + 1] + (s3 - s2) * h * df[i + 1];
  }
  return ((6 * s2 - 6 * s) * f[i] + (3 * s2 - 4 * s + 1) * h * df[i] +
          (-6 * s2 + 6 * s) * f[i + 1] + (3 * s2 - 2 * s) * h * df[i + 1]) /
         h;
}

// Cumulative integral of a positive, locally power-law sampled function:
// each cell integrated exactly for f = f_i (xi/xi_i)^p.
std::vector<double> cumulative_powerlaw(const std::vector<double>& x,
                                        const std::vector<double>& f, double initial) {
  std::vector<double> cum(x.size());
  cum[0] = initial;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double r = x[i + 1] / x[i];
    double seg;
    if (f[i] > 0.0 && f[i + 1] > 0.0) {
      const double p = std::log(f[i + 1] / f[i]) / std::log(r);
      seg = (std::abs(p + 1.0) > 1e-9)
                ? f[i] * x[i] * (std::pow(r, p + 1.0) - 1.0) / (p + 1.0)
                : f[i] * x[i] * std::log(r);
    } else {
      seg = 0.5 * (f[i] + f[i + 1]) * (x[i + 1] - x[i]);
    }
    cum[i + 1] = cum[i] + seg;
  }
  return cum;
}

}  // namespace

double StationaryProfile::series_c3() const {
  const int d = constants.d;
  return -alpha * alpha * alpha * (d - 1.0) / (3.0 * (d + 2.0));
}

double StationaryProfile::eval(double x) const {
  if (x <= xi.front()) return alpha * x + series_c3() * x * x * x;
  if (x >= xi.back()) {
    const double plateau = (h_estimate > 0.0) ? h_estimate
                                              : (M_PI_2 - u.back()) * std::pow(xi.back(), constants.gamma);
    return M_PI_2 - plateau * std::pow(x, -constants.gamma) -
           h_correction * std::pow(x, -constants.gamma - 2.0);
  }
  return hermite(xi, u, du, x, false);
}

double StationaryProfile::eval_deriv(double x) const {
  if (x <= xi.front()) return alpha + 3.0 * series_c3() * x * x;
  if (x >= xi.back()) {
    const double g = constants.gamma;
    const double plateau = (h_estimate > 0.0) ? h_estimate
                                              : (M_PI_2 - u.back()) * std::pow(xi.back(), g);
    return g * plateau * std::pow(x, -g - 1.0) + (g + 2.0) * h_correction * std::pow(x, -g - 3.0);
  }
  return hermite(xi, u, du, x, true);
}

StationaryProfile solve_stationary(const SpectralConstants& c, double alpha, double xi_max,
                                   const ShootOptions& opt) {
  if (!(alpha > 0.0)) fail(errc::invalid_argument, "alpha must be positive");
  if (!(xi_max > 1.0)) fail(errc::invalid_argument, "xi_max too small");

  StationaryProfile p;
  p.constants = c;
  p.alpha = alpha;

  // The series is in powers of (alpha xi); shrink the handoff point for
  // steep profiles and confirm the truncation error is admissible.
  const double xs = std::min(opt.xi_start, opt.xi_start / std::max(1.0, alpha));
  const double z = alpha * xs;
  if (z * z * z * z > opt.series_tol)
    fail(errc::series_start_failure, "series remainder at the handoff point exceeds tolerance");

  p.xi = log_grid(xs, xi_max, opt.points_per_decade);
  p.u.resize(p.xi.size());
  p.du.resize(p.xi.size());

  const double c3 = p.series_c3();
  std::array<double, 2> state{alpha * xs + c3 * xs * xs * xs, alpha + 3.0 * c3 * xs * xs};

  auto rhs = [&c](const std::array<double, 2>& s, std::array<double, 2>& dsdx, double x) {
    dsdx[0] = s[1];
    dsdx[1] = -(c.d - 1.0) / x * s[1] + (c.d - 1.0) / (2.0 * x * x) * std::sin(2.0 * s[0]);
  };

  std::size_t idx = 0;
  auto observer = [&](const std::array<double, 2>& s, double /*x*/) {
    if (!(std::abs(s[0]) < M_PI))
      fail(errc::integration_blowup, "stationary solution left (-pi, pi); integration bug");
    p.u[idx] = s[0];
    p.du[idx] = s[1];
    ++idx;
  };

  using stepper_t = odeint::runge_kutta_dopri5<std::array<double, 2>>;
  odeint::integrate_times(odeint::make_controlled<stepper_t>(opt.abs_tol, opt.rel_tol), rhs, state,
                          p.xi.begin(), p.xi.end(), xs * 0.1, observer);
  return p;
}

double extract_h(StationaryProfile& profile) {
  const double g = profile.constants.gamma;
  const double xi_max = profile.xi.back();
  const double lo = xi_max / 10.0, hi = xi_max;

  // Linear least squares for (pi/2 - U) xi^gamma = h + c xi^{-2}.
  double s11 = 0, s12 = 0, s22 = 0, b1 = 0, b2 = 0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < profile.xi.size(); ++i) {
    const double x = profile.xi[i];
    if (x < lo || x > hi) continue;
    const double v = (M_PI_2 - profile.u[i]) * std::pow(x, g);
    const double w = std::pow(x, -2.0);
    s11 += 1.0;
    s12 += w;
    s22 += w * w;
    b1 += v;
    b2 += v * w;
    ++count;
  }
  if (count < 8) fail(errc::fit_unstable, "h fit window holds too few samples");
  const double det = s11 * s22 - s12 * s12;
  const double h = (b1 * s22 - b2 * s12) / det;
  const double corr = (s11 * b2 - s12 * b1) / det;
  if (!(h > 0.0)) fail(errc::fit_unstable, "asymptotic coefficient h is not positive");

  double worst = 0.0;
  for (std::size_t i = 0; i < profile.xi.size(); ++i) {
    const double x = profile.xi[i];
    if (x < lo || x > hi) continue;
    const double v = (M_PI_2 - profile.u[i]) * std::pow(x, g);
    worst = std::max(worst, std::abs(v - h - corr * std::pow(x, -2.0)) / h);
  }
  if (worst > 0.01)
    fail(errc::fit_unstable, "plateau varies by more than 1% after the xi^-2 correction");

  profile.h_estimate = h;
  profile.h_correction = corr;
  profile.fit_window_lo = lo;
  profile.fit_window_hi = hi;
  profile.fit_residual = worst;
  return h;
}

double QProfile::tail_slope() const {
  const double hi = xi.back();
  const double lo = hi / 10.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    if (xi[i] < lo || q[i] <= 0.0) continue;
    const double lx = std::log(xi[i]), ly = std::log(q[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 4) fail(errc::fit_unstable, "too few positive tail samples for a slope");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

QProfile solve_q_profile(const StationaryProfile& u_profile, double beta, double omega_l,
                         double delta) {
  const int d = u_profile.constants.d;
  const double cp = beta + 0.5 + omega_l;
  const double alpha = u_profile.alpha;
  const auto& xi = u_profile.xi;
  const std::size_t n = xi.size();

  // Inner integral I(t) = cp * int_0^t s^{d+1} U'(s)^2 ds, seeded with the
  // exact series value on [0, xi_0].
  std::vector<double> inner_density(n);
  for (std::size_t i = 0; i < n; ++i)
    inner_density[i] = cp * std::pow(xi[i], d + 1.0) * u_profile.du[i] * u_profile.du[i];
  const double x0 = xi.front();
  const double inner_seed = cp * alpha * alpha * std::pow(x0, d + 2.0) / (d + 2.0);
  std::vector<double> inner = cumulative_powerlaw(xi, inner_density, inner_seed);

  // Outer integral J(xi) of I(t) / (t^{d+1} U'(t)^2); the series limit of
  // q/(xi U') at xi_0 provides the constant of integration.
  std::vector<double> outer_density(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double denom = std::pow(xi[i], d + 1.0) * u_profile.du[i] * u_profile.du[i];
    if (!(denom > 0.0)) fail(errc::division_underflow, "U' vanished in the q-profile integrand");
    outer_density[i] = inner[i] / denom;
  }
  const double a_series = cp * alpha / (2.0 * (d + 2.0));
  const double ratio_seed = a_series * x0 * x0 / alpha;  // q/(xi U') at xi_0
  std::vector<double> ratio = cumulative_powerlaw(xi, outer_density, ratio_seed);

  QProfile qp;
  qp.beta = beta;
  qp.delta = delta;
  qp.omega_l = omega_l;
  qp.xi = xi;
  qp.q.resize(n);
  for (std::size_t i = 0; i < n; ++i) qp.q[i] = xi[i] * u_profile.du[i] * ratio[i];
  return qp;
}

QProfile solve_q_profile_ivp(const SpectralConstants& c, double alpha_delta, double beta,
                             double omega_l, double xi_max, const ShootOptions& opt) {
  const double cp = beta + 0.5 + omega_l;
  const double xs = std::min(opt.xi_start, opt.xi_start / std::max(1.0, alpha_delta));
  const double c3 = -std::pow(alpha_delta, 3) * (c.d - 1.0) / (3.0 * (c.d + 2.0));
  const double a = cp * alpha_delta / (2.0 * (c.d + 2.0));

  QProfile qp;
  qp.beta = beta;
  qp.delta = 1.0;
  qp.omega_l = omega_l;
  qp.xi = log_grid(xs, xi_max, opt.points_per_decade);
  qp.q.resize(qp.xi.size());

  std::array<double, 4> state{alpha_delta * xs + c3 * xs * xs * xs,
                              alpha_delta + 3.0 * c3 * xs * xs, a * xs * xs * xs,
                              3.0 * a * xs * xs};
  auto rhs = [&](const std::array<double, 4>& s, std::array<double, 4>& ds, double x) {
    ds[0] = s[1];
    ds[1] = -(c.d - 1.0) / x * s[1] + (c.d - 1.0) / (2.0 * x * x) * std::sin(2.0 * s[0]);
    ds[2] = s[3];
    ds[3] = -(c.d - 1.0) / x * s[3] + (c.d - 1.0) / (x * x) * std::cos(2.0 * s[0]) * s[2] +
            cp * x * s[1];
  };
  std::size_t idx = 0;
  auto observer = [&](const std::array<double, 4>& s, double) { qp.q[idx++] = s[2]; };
  using stepper_t = odeint::runge_kutta_dopri5<std::array<double, 4>>;
  odeint::integrate_times(odeint::make_controlled<stepper_t>(opt.abs_tol, opt.rel_tol), rhs, state,
                          qp.xi.begin(), qp.xi.end(), xs * 0.1, observer);
  return qp;
}

}  // namespace hmflow
