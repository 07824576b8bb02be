#include "semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace hmflow {

ModeCoefficients decompose(const Fn& v, const EigenfunctionBasis& basis, double s,
                           const QuadOptions& opt) {
  ModeCoefficients mc;
  mc.basis = &basis;
  mc.a = project(v, basis, basis.n_max(), opt);
  mc.s = s;
  return mc;
}

ModeCoefficients evolve(const ModeCoefficients& coeffs, double s_elapsed) {
  if (!(s_elapsed >= 0.0)) fail(errc::invalid_argument, "evolve needs s_elapsed >= 0");
  if (!coeffs.basis) fail(errc::invalid_argument, "coefficients lack a basis");
  ModeCoefficients out = coeffs;
  for (std::size_t n = 0; n < out.a.size(); ++n)
    out.a[n] *= std::exp(-eigenvalue(coeffs.basis->constants(), int(n)) * s_elapsed);
  out.s += s_elapsed;
  return out;
}

double reconstruct(const ModeCoefficients& coeffs, double y) {
  if (!coeffs.basis) fail(errc::invalid_argument, "coefficients lack a basis");
  double acc = 0.0;
  for (std::size_t n = 0; n < coeffs.a.size(); ++n)
    acc += coeffs.a[n] * coeffs.basis->eval(int(n), y);
  return acc;
}

namespace {

struct WeightedAverager {
  const Fn* psi;
  SpectralConstants c;
  double rel_tol;

  double weight(double x) const { return std::pow(x, 1.0 + c.omega) * std::exp(-0.25 * x * x); }
  double numer_density(double x) const {
    return std::abs((*psi)(x)) * std::pow(x, c.gamma) * weight(x);
  }

  double average(double a, double b) const {
    const double den =
        integrate_interval([this](double x) { return weight(x); }, a, b, rel_tol);
    if (!(den > 0.0)) return 0.0;
    const double num =
        integrate_interval([this](double x) { return numer_density(x); }, a, b, rel_tol);
    return num / den;
  }
};

}  // namespace

double maximal_function(const Fn& psi, const SpectralConstants& c, double y, Monotonicity hint,
                        const MaximalOptions& opt) {
  if (!(y > 0.0)) fail(errc::domain_error, "maximal function argument must be positive");
  WeightedAverager av{&psi, c, opt.quad_rel_tol};
  const double x_hi = std::max(4.0 * y, 45.0);

  try {
    if (hint == Monotonicity::nonincreasing) return av.average(0.0, y);
    if (hint == Monotonicity::nondecreasing) return av.average(y, x_hi);
  } catch (const Error& e) {
    if (e.code() == errc::quadrature_non_convergent)
      fail(errc::non_integrable, "maximal-function integral did not converge near the origin");
    throw;
  }

  // Interval grid: log-spaced left endpoints in [0, y], right in [y, x_hi].
  const int m = opt.grid_points;
  std::vector<double> lefts(m), rights(m);
  const double x_lo = y * 1e-3;
  for (int i = 0; i < m; ++i) {
    const double t = double(i) / (m - 1);
    lefts[i] = (i == 0) ? 0.0 : x_lo * std::pow(y / x_lo, double(i - 1) / (m - 2));
    rights[i] = y * std::pow(x_hi / y, t);
  }

  // Prefix integrals over the union of candidate endpoints.
  std::vector<double> pts;
  pts.reserve(2 * m);
  pts.insert(pts.end(), lefts.begin(), lefts.end());
  pts.insert(pts.end(), rights.begin(), rights.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const std::size_t np = pts.size();
  std::vector<double> cum_n(np, 0.0), cum_d(np, 0.0);
  for (std::size_t i = 1; i < np; ++i) {
    double seg_n, seg_d;
    try {
      seg_n = integrate_interval([&](double x) { return av.numer_density(x); }, pts[i - 1], pts[i],
                                 opt.quad_rel_tol);
      seg_d = integrate_interval([&](double x) { return av.weight(x); }, pts[i - 1], pts[i],
                                 opt.quad_rel_tol);
    } catch (const Error&) {
      if (i == 1)
        fail(errc::non_integrable, "maximal-function integral did not converge near the origin");
      throw;
    }
    cum_n[i] = cum_n[i - 1] + seg_n;
    cum_d[i] = cum_d[i - 1] + seg_d;
  }

  auto cum_at = [&](const std::vector<double>& cum, bool numer, double x) {
    auto it = std::upper_bound(pts.begin(), pts.end(), x);
    std::size_t i = (it == pts.begin()) ? 0 : (it - pts.begin() - 1);
    double extra = 0.0;
    if (x > pts[i])
      extra = numer ? integrate_interval([&](double t) { return av.numer_density(t); }, pts[i], x,
                                         opt.quad_rel_tol)
                    : integrate_interval([&](double t) { return av.weight(t); }, pts[i], x,
                                         opt.quad_rel_tol);
    return cum[i] + extra;
  };
  auto average_of = [&](double a, double b) {
    const double den = cum_at(cum_d, false, b) - cum_at(cum_d, false, a);
    if (!(den > 0.0)) return 0.0;
    return (cum_at(cum_n, true, b) - cum_at(cum_n, true, a)) / den;
  };

  double best = 0.0;
  int bi = 0, bj = m - 1;
  for (int i = 0; i < m; ++i) {
    const std::size_t ia = std::lower_bound(pts.begin(), pts.end(), lefts[i]) - pts.begin();
    for (int j = 0; j < m; ++j) {
      const std::size_t ib = std::lower_bound(pts.begin(), pts.end(), rights[j]) - pts.begin();
      const double den = cum_d[ib] - cum_d[ia];
      if (!(den > 0.0)) continue;
      const double val = (cum_n[ib] - cum_n[ia]) / den;
      if (val > best) {
        best = val;
        bi = i;
        bj = j;
      }
    }
  }

  // Golden-section refinement of the best cell, one coordinate at a time.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double a_lo = lefts[std::max(bi - 1, 0)], a_hi = lefts[std::min(bi + 1, m - 1)];
  double b_lo = rights[std::max(bj - 1, 0)], b_hi = rights[std::min(bj + 1, m - 1)];
  double a_cur = lefts[bi], b_cur = rights[bj];
  for (int it = 0; it < opt.refine_iters; ++it) {
    if (it % 2 == 0) {
      const double x1 = a_hi - gr * (a_hi - a_lo), x2 = a_lo + gr * (a_hi - a_lo);
      if (average_of(x1, b_cur) > average_of(x2, b_cur)) a_hi = x2; else a_lo = x1;
      a_cur = 0.5 * (a_lo + a_hi);
    } else {
      const double x1 = b_hi - gr * (b_hi - b_lo), x2 = b_lo + gr * (b_hi - b_lo);
      if (average_of(a_cur, x1) > average_of(a_cur, x2)) b_hi = x2; else b_lo = x1;
      b_cur = 0.5 * (b_lo + b_hi);
    }
    const double val = average_of(a_cur, b_cur);
    if (val > best) best = val;
  }
  return best;
}

double check_pointwise_bound(const ModeCoefficients& psi_coeffs, const std::vector<double>& s_values,
                             const std::vector<double>& y_values, const MaximalOptions& opt) {
  if (!psi_coeffs.basis) fail(errc::invalid_argument, "coefficients lack a basis");
  const SpectralConstants& c = psi_coeffs.basis->constants();
  Fn psi = [&psi_coeffs](double y) { return reconstruct(psi_coeffs, y); };

  std::vector<double> maximal(y_values.size());
  for (std::size_t j = 0; j < y_values.size(); ++j)
    maximal[j] = maximal_function(psi, c, y_values[j], Monotonicity::unknown, opt);

  double worst = 0.0;
  for (double s : s_values) {
    const ModeCoefficients evolved = evolve(psi_coeffs, s);
    for (std::size_t j = 0; j < y_values.size(); ++j) {
      const double y = y_values[j];
      const double denom = std::pow(y * std::exp(-0.5 * s), -c.gamma) * maximal[j];
      if (!(denom > 0.0)) continue;
      worst = std::max(worst, std::abs(reconstruct(evolved, y)) / denom);
    }
  }
  return worst;
}

}  // namespace hmflow
