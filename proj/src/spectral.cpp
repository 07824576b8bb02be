#include "spectral.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace hmflow {

SpectralConstants compute_constants(int d) {
  if (d <= 6)
    fail(errc::dimension_too_small,
         "dimension d=" + std::to_string(d) + " rejected: need integer d >= 7");
  SpectralConstants c;
  c.d = d;
  c.omega = std::sqrt(double(d) * d - 8.0 * d + 8.0);
  c.gamma = 0.5 * (d - 2.0 - c.omega);
  return c;
}

double eigenvalue(const SpectralConstants& c, int n) {
  if (n < 0) fail(errc::invalid_argument, "eigenvalue index must be nonnegative");
  return -0.5 * c.gamma + n;
}

void RadialProfile::validate() const {
  if (grid.size() != values.size()) fail(errc::invalid_argument, "grid/values length mismatch");
  double prev = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > prev)) fail(errc::domain_error, "grid must be strictly increasing and positive");
    if (!std::isfinite(values[i])) fail(errc::domain_error, "profile values must be finite");
    prev = grid[i];
  }
}

double laguerre(int n, double a, double x) {
  if (n == 0) return 1.0;
  double lm1 = 1.0;
  double l = 1.0 + a - x;
  for (int k = 1; k < n; ++k) {
    const double lp1 = ((2.0 * k + 1.0 + a - x) * l - (k + a) * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
  }
  return l;
}

EigenfunctionBasis EigenfunctionBasis::build(const SpectralConstants& c, int n_max) {
  if (n_max < 0) fail(errc::invalid_argument, "n_max must be nonnegative");
  EigenfunctionBasis b;
  b.constants_ = c;
  b.n_max_ = n_max;
  const double a = 0.5 * c.omega;
  // The measure carries 2^{d-1-2gamma} through the substitution X = y^2/4;
  // the constant below folds it into the normalization so that the basis is
  // orthonormal in L^2(rho dy) on the nose.
  const double lc = (c.gamma - 0.5 * (c.d - 1.0)) * std::log(2.0);
  b.norm_.resize(n_max + 1);
  b.origin_.resize(n_max + 1);
  b.infinity_.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    const double lg_n1 = std::lgamma(n + 1.0);
    const double lg_na1 = std::lgamma(n + 1.0 + a);
    b.norm_[n] = std::exp(lc + 0.5 * (lg_n1 - lg_na1));
    b.origin_[n] = std::exp(lc + 0.5 * (lg_na1 - lg_n1) - std::lgamma(1.0 + a));
    // leading Laguerre coefficient carries the (-1)^n alternation
    b.infinity_[n] =
        (n % 2 ? -1.0 : 1.0) * std::exp(lc - n * std::log(4.0) - 0.5 * (lg_n1 + lg_na1));
  }
  return b;
}

void EigenfunctionBasis::check(int n) const {
  if (n < 0 || n > n_max_) fail(errc::index_out_of_range, "basis index out of range");
}

double EigenfunctionBasis::eval(int n, double y) const {
  check(n);
  if (!(y > 0.0)) fail(errc::domain_error, "eigenfunction argument must be positive");
  const double x = 0.25 * y * y;
  return norm_[n] * std::pow(y, -constants_.gamma) * laguerre(n, 0.5 * constants_.omega, x);
}

void EigenfunctionBasis::eval_derivs(int n, double y, double& f, double& df, double& ddf) const {
  check(n);
  if (!(y > 0.0)) fail(errc::domain_error, "eigenfunction argument must be positive");
  const double g = constants_.gamma;
  const double a = 0.5 * constants_.omega;
  const double x = 0.25 * y * y;
  const double L = laguerre(n, a, x);
  // dL_n^{(a)}/dx = -L_{n-1}^{(a+1)}, d^2/dx^2 = L_{n-2}^{(a+2)}.
  const double Lp = (n >= 1) ? -laguerre(n - 1, a + 1.0, x) : 0.0;
  const double Lpp = (n >= 2) ? laguerre(n - 2, a + 2.0, x) : 0.0;
  const double pw = norm_[n] * std::pow(y, -g);
  f = pw * L;
  df = pw * (-g / y * L + 0.5 * y * Lp);
  ddf = pw * (g * (g + 1.0) / (y * y) * L + 0.5 * (1.0 - 2.0 * g) * Lp + 0.25 * y * y * Lpp);
}

namespace {

// Substitution X = y^2/4 turns the weight into X^{gamma + omega/2} e^{-X}.
// With the rule parameter omega/2 the leftover X^gamma cancels the y^{-2gamma}
// of eigenfunction pairs, so those integrands are polynomial in X.
struct QuadPass {
  double value = 0.0;
  double magnitude = 0.0;  // sum of |terms|, the cancellation reference
};

QuadPass quad_pass(const Fn& f, const SpectralConstants& c, int nodes) {
  const QuadRule& rule = gauss_gen_laguerre(nodes, 0.5 * c.omega);
  const double scale = std::exp((c.d - 1.0) * std::log(2.0));
  QuadPass p;
  for (int i = 0; i < nodes; ++i) {
    const double X = rule.x[i];
    const double y = 2.0 * std::sqrt(X);
    const double term = rule.w[i] * std::pow(X, c.gamma) * f(y);
    p.value += term;
    p.magnitude += std::abs(term);
  }
  p.value *= scale;
  p.magnitude *= scale;
  return p;
}

// Full-weight rule, exact when f is polynomial in y^2.
QuadPass quad_pass_smooth(const Fn& f, const SpectralConstants& c, int nodes) {
  const QuadRule& rule = gauss_gen_laguerre(nodes, 0.5 * (c.d - 2.0));
  const double scale = std::exp((c.d - 1.0) * std::log(2.0));
  QuadPass p;
  for (int i = 0; i < nodes; ++i) {
    const double term = rule.w[i] * f(2.0 * std::sqrt(rule.x[i]));
    p.value += term;
    p.magnitude += std::abs(term);
  }
  p.value *= scale;
  p.magnitude *= scale;
  return p;
}

bool converged_pair(const QuadPass& v, const QuadPass& v2, double rel_tol) {
  // Relative gate, with an absolute floor acknowledging that integrals much
  // smaller than the integrand's L1 mass are limited by cancellation error.
  const double scale = std::max(std::abs(v.value), std::abs(v2.value));
  const double floor = 1e-13 * std::max(v.magnitude, v2.magnitude) + 1e-300;
  return std::abs(v.value - v2.value) <= std::max(rel_tol * scale, floor);
}

}  // namespace

double weighted_integral(const Fn& f, const SpectralConstants& c, const QuadOptions& opt) {
  QuadPass v = quad_pass(f, c, opt.nodes);
  if (!opt.check_convergence) return v.value;
  // Three routes, matched to the smoothness class of the integrand: the
  // eigenfunction-aware rule, the plain rule (smooth in y^2), and adaptive
  // panels in y (smooth in y). The first whose node-doubling check holds wins.
  QuadPass v2 = quad_pass(f, c, 2 * opt.nodes);
  if (converged_pair(v, v2, opt.rel_tol)) return v2.value;
  const double floor = 1e-13 * std::max(v.magnitude, v2.magnitude);
  v = quad_pass_smooth(f, c, opt.nodes);
  v2 = quad_pass_smooth(f, c, 2 * opt.nodes);
  if (converged_pair(v, v2, opt.rel_tol)) return v2.value;
  try {
    return integrate_interval(
        [&](double y) {
          return f(y) * std::pow(y, c.d - 1.0) * std::exp(-0.25 * y * y);
        },
        0.0, 45.0, opt.rel_tol, floor);
  } catch (const Error&) {
    fail(errc::quadrature_non_convergent,
         "weighted integral changed by more than rel_tol under node doubling");
  }
}

double inner_product(const Fn& f, const Fn& g, const SpectralConstants& c, const QuadOptions& opt) {
  return weighted_integral([&](double y) { return f(y) * g(y); }, c, opt);
}

double inner_product(const RadialProfile& f, const RadialProfile& g, const SpectralConstants& c,
                     const QuadOptions& opt) {
  return inner_product(interpolant(f), interpolant(g), c, opt);
}

Fn interpolant(const RadialProfile& p) {
  p.validate();
  const auto x = p.grid;
  const auto y = p.values;
  const std::size_t n = x.size();
  if (n == 0) fail(errc::invalid_argument, "cannot interpolate empty profile");
  if (n == 1) {
    const double x0 = x[0], y0 = y[0];
    return [x0, y0](double t) { return t == x0 ? y0 : 0.0; };
  }
  // Fritsch-Carlson monotone slopes.
  std::vector<double> h(n - 1), delta(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (y[i + 1] - y[i]) / h[i];
  }
  m[0] = delta[0];
  m[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return [x, y, h, m, n](double t) -> double {
    if (t < x.front() || t > x.back()) return 0.0;
    auto it = std::upper_bound(x.begin(), x.end(), t);
    std::size_t i = (it == x.begin()) ? 0 : (it - x.begin() - 1);
    if (i >= n - 1) i = n - 2;
    const double s = (t - x[i]) / h[i];
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
    return h00 * y[i] + h10 * h[i] * m[i] + h01 * y[i + 1] + h11 * h[i] * m[i + 1];
  };
}

namespace {

void fd_derivs(const Fn& f, double y, double& df, double& ddf) {
  const double h = std::min(1e-3 * std::max(y, 1.0), 0.2 * y);
  const double fm2 = f(y - 2 * h), fm1 = f(y - h), f0 = f(y), fp1 = f(y + h), fp2 = f(y + 2 * h);
  df = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  ddf = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
}

RadialProfile operator_on(const SpectralConstants& c, const std::vector<double>& grid,
                          const std::function<void(double, double&, double&, double&)>& derivs) {
  RadialProfile out;
  out.variable = RadialProfile::Var::y;
  out.grid = grid;
  out.values.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double y = grid[i];
    if (!(y > 0.0)) fail(errc::domain_error, "operator grid must be positive");
    double f, df, ddf;
    derivs(y, f, df, ddf);
    out.values[i] = -ddf - ((c.d - 1.0) / y - 0.5 * y) * df - (c.d - 1.0) / (y * y) * f;
  }
  return out;
}

}  // namespace

RadialProfile apply_operator(const Fn& f, const SpectralConstants& c,
                             const std::vector<double>& y_grid) {
  return operator_on(c, y_grid, [&](double y, double& v, double& dv, double& ddv) {
    v = f(y);
    fd_derivs(f, y, dv, ddv);
  });
}

RadialProfile apply_operator(const Fn& f, const Fn& df, const Fn& ddf, const SpectralConstants& c,
                             const std::vector<double>& y_grid) {
  return operator_on(c, y_grid, [&](double y, double& v, double& dv, double& ddv) {
    v = f(y);
    dv = df(y);
    ddv = ddf(y);
  });
}

RadialProfile apply_operator(const EigenfunctionBasis& basis, int n,
                             const std::vector<double>& y_grid) {
  return operator_on(basis.constants(), y_grid, [&](double y, double& v, double& dv, double& ddv) {
    basis.eval_derivs(n, y, v, dv, ddv);
  });
}

double hardy_margin(const Fn& f, const SpectralConstants& c, double alpha, const Fn* df,
                    const QuadOptions& opt) {
  Fn deriv;
  if (df) {
    deriv = *df;
  } else {
    deriv = [&f](double y) {
      double d1, d2;
      fd_derivs(f, y, d1, d2);
      return d1;
    };
  }
  const double grad = weighted_integral([&](double y) { double d = deriv(y); return d * d; }, c, opt);
  const double pot = weighted_integral([&](double y) { double v = f(y); return v * v / (y * y); }, c, opt);
  const double mass = weighted_integral([&](double y) { double v = f(y); return v * v; }, c, opt);
  return grad + (alpha * alpha - (c.d - 2.0) * alpha) * pot + 0.5 * alpha * mass;
}

std::vector<double> project(const Fn& f, const EigenfunctionBasis& basis, int n_max,
                            const QuadOptions& opt) {
  if (n_max > basis.n_max()) fail(errc::index_out_of_range, "projection order exceeds basis n_max");
  std::vector<double> coeffs(n_max + 1);
  for (int n = 0; n <= n_max; ++n)
    coeffs[n] = inner_product(f, [&basis, n](double y) { return basis.eval(n, y); },
                              basis.constants(), opt);
  return coeffs;
}

std::vector<double> project(const RadialProfile& f, const EigenfunctionBasis& basis, int n_max,
                            const QuadOptions& opt) {
  return project(interpolant(f), basis, n_max, opt);
}

}  // namespace hmflow
