#include "fitting.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace hmflow {

namespace {

struct LineFit {
  double intercept = 0.0, slope = 0.0, ssr = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sy - f.slope * sx) / n;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.ssr += r * r;
  }
  return f;
}

}  // namespace

BlowupFit detect_blowup_and_fit(const std::vector<double>& t, const std::vector<double>& g,
                                const FitOptions& opt) {
  if (t.size() != g.size() || t.size() < 8)
    fail(errc::invalid_argument, "gradient series too short to fit");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(g[i] > 0.0) || !std::isfinite(t[i]))
      fail(errc::invalid_argument, "gradient series must be positive and finite");
    if (i > 0 && !(t[i] > t[i - 1])) fail(errc::invalid_argument, "times must increase");
  }

  // Trailing window by gradient magnitude.
  const double g_max = *std::max_element(g.begin(), g.end());
  const double g_lo = g_max * std::pow(10.0, -opt.tail_decades);
  std::vector<double> tw, lg;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (g[i] >= g_lo) {
      tw.push_back(t[i]);
      lg.push_back(std::log(g[i]));
    }
  }
  if (tw.size() < 8 ||
      (*std::max_element(lg.begin(), lg.end()) - *std::min_element(lg.begin(), lg.end())) <
          opt.min_decades * std::log(10.0))
    fail(errc::insufficient_decades, "gradient series spans too few decades");

  const double t_last = tw.back();
  const double span = t_last - tw.front();

  // Seed T by extrapolating where g^{-1/p0} hits zero.
  std::vector<double> z(tw.size());
  for (std::size_t i = 0; i < tw.size(); ++i) z[i] = std::exp(-lg[i] / opt.p0);
  const LineFit seed = fit_line(tw, z);
  double T0 = (seed.slope < 0.0) ? -seed.intercept / seed.slope : t_last + 0.1 * span;
  if (!(T0 > t_last)) T0 = t_last + 0.01 * span;

  auto ssr_at = [&](double T) {
    std::vector<double> x(tw.size());
    for (std::size_t i = 0; i < tw.size(); ++i) x[i] = std::log(T - tw[i]);
    return fit_line(x, lg).ssr;
  };

  // Golden-section search on u = log(T - t_last); unimodal in practice.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::log((T0 - t_last) * 1e-8), hi = std::log((T0 - t_last) * 1e3);
  double u1 = hi - gr * (hi - lo), u2 = lo + gr * (hi - lo);
  double f1 = ssr_at(t_last + std::exp(u1)), f2 = ssr_at(t_last + std::exp(u2));
  for (int it = 0; it < 300 && hi - lo > 1e-14; ++it) {
    if (f1 < f2) {
      hi = u2;
      u2 = u1;
      f2 = f1;
      u1 = hi - gr * (hi - lo);
      f1 = ssr_at(t_last + std::exp(u1));
    } else {
      lo = u1;
      u1 = u2;
      f1 = f2;
      u2 = lo + gr * (hi - lo);
      f2 = ssr_at(t_last + std::exp(u2));
    }
  }
  const double T = t_last + std::exp(0.5 * (lo + hi));
  if (!std::isfinite(T)) fail(errc::fit_diverged, "blow-up time search failed");

  std::vector<double> x(tw.size());
  for (std::size_t i = 0; i < tw.size(); ++i) x[i] = std::log(T - tw[i]);
  const LineFit fin = fit_line(x, lg);

  BlowupFit fit;
  fit.T = T;
  fit.p = -fin.slope;
  fit.C = std::exp(fin.intercept);
  fit.residual = std::sqrt(fin.ssr / tw.size());
  if (!std::isfinite(fit.p) || fit.residual > opt.residual_gate)
    fail(errc::fit_diverged, "power-law fit residual exceeds the gate");
  if (fit.p > 0.5 + opt.margin)
    fit.classification = BlowupFit::Class::TypeII;
  else if (std::abs(fit.p - 0.5) <= opt.margin)
    fit.classification = BlowupFit::Class::TypeI;
  return fit;
}

DiagnosticsResult similarity_diagnostics(const std::vector<Checkpoint>& checkpoints, double T_est,
                                         const EigenfunctionBasis& basis, int l,
                                         const DiagnosticsOptions& opt) {
  if (l < 0 || l > basis.n_max()) fail(errc::index_out_of_range, "mode index outside basis");
  DiagnosticsResult res;
  res.strip_violation = -M_PI_2;
  for (const Checkpoint& cp : checkpoints) {
    const double tau = T_est - cp.t;
    if (!(tau > 0.0)) continue;
    const double scale = 1.0 / std::sqrt(tau);

    RadialProfile slice;
    slice.variable = RadialProfile::Var::y;
    slice.grid.reserve(cp.r.size());
    slice.values.reserve(cp.r.size());
    for (std::size_t i = 1; i < cp.r.size(); ++i) {
      slice.grid.push_back(cp.r[i] * scale);
      const double psi = cp.r[i] * cp.phi[i] - M_PI_2;
      slice.values.push_back(psi);
      res.strip_violation = std::max(res.strip_violation, std::abs(psi) - M_PI_2);
    }
    res.s.push_back(-std::log(tau));
    res.a.push_back(project(interpolant(slice), basis, basis.n_max(), opt.quad));
  }
  if (res.s.size() < 4 || res.s.back() - res.s.front() < opt.skip + opt.window)
    fail(errc::window_too_short, "checkpoint coverage shorter than the diagnostic window");
  res.a_inf = res.a.back();

  // Trailing window: the early checkpoints carry the collapse transient,
  // while the decaying mode dominates up to the final time.
  res.slope_window_hi = res.s.back();
  res.slope_window_lo = res.slope_window_hi - opt.window;
  std::vector<double> sx, av;
  for (std::size_t k = 0; k < res.s.size(); ++k) {
    if (res.s[k] < res.slope_window_lo) continue;
    sx.push_back(res.s[k]);
    av.push_back(res.a[k][l]);
  }
  if (sx.size() < 5) fail(errc::window_too_short, "too few checkpoints inside the slope window");

  // Separable least squares for a(s) = c0 + c1 e^{-lambda s}: the best
  // (c0, c1) at fixed lambda come from a 2x2 normal system, and lambda is
  // found by golden-section search on its log.
  auto ssr_at = [&](double lambda, double* c0_out) {
    double s1 = sx.size(), se = 0, see = 0, sa = 0, sae = 0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
      const double e = std::exp(-lambda * (sx[i] - sx.front()));
      se += e;
      see += e * e;
      sa += av[i];
      sae += av[i] * e;
    }
    const double det = s1 * see - se * se;
    const double c1 = (s1 * sae - se * sa) / det;
    const double c0 = (sa - c1 * se) / s1;
    double ssr = 0;
    for (std::size_t i = 0; i < sx.size(); ++i) {
      const double r = av[i] - c0 - c1 * std::exp(-lambda * (sx[i] - sx.front()));
      ssr += r * r;
    }
    if (c0_out) *c0_out = c0;
    return ssr;
  };
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = std::log(5e-3), hi = std::log(5.0);
  double u1 = hi - gr * (hi - lo), u2 = lo + gr * (hi - lo);
  double f1 = ssr_at(std::exp(u1), nullptr), f2 = ssr_at(std::exp(u2), nullptr);
  while (hi - lo > 1e-12) {
    if (f1 < f2) {
      hi = u2, u2 = u1, f2 = f1;
      u1 = hi - gr * (hi - lo);
      f1 = ssr_at(std::exp(u1), nullptr);
    } else {
      lo = u1, u1 = u2, f1 = f2;
      u2 = lo + gr * (hi - lo);
      f2 = ssr_at(std::exp(u2), nullptr);
    }
  }
  const double lambda_hat = std::exp(0.5 * (lo + hi));
  ssr_at(lambda_hat, &res.a_inf[l]);
  res.slope_l = -lambda_hat;
  res.strip_ok = res.strip_violation <= opt.strip_tol;
  return res;
}

}  // namespace hmflow
