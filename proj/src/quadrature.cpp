#include "quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "errors.hpp"

namespace hmflow {

namespace {

// log|L_{m}^{(alpha)}(x)| by the ascending recurrence with running
// renormalization, so large arguments neither overflow nor lose the scale.
double log_abs_laguerre(int m, double alpha, double x) {
  double p0 = 1.0, p1 = 1.0 + alpha - x, shift = 0.0;
  for (int k = 1; k < m; ++k) {
    const double p2 = ((2.0 * k + 1.0 + alpha - x) * p1 - (k + alpha) * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
    const double mag = std::max(std::abs(p0), std::abs(p1));
    if (mag > 1e150) {
      p0 /= mag;
      p1 /= mag;
      shift += std::log(mag);
    }
  }
  return shift + std::log(std::abs(m == 0 ? p0 : p1));
}

QuadRule build_rule(int n, double alpha) {
  if (n < 1) fail(errc::invalid_argument, "quadrature rule needs at least one node");
  if (alpha <= -1.0) fail(errc::invalid_argument, "Laguerre parameter must exceed -1");

  // Nodes from the Jacobi matrix of the monic generalized Laguerre
  // recurrence (Golub-Welsch).
  Eigen::VectorXd diag(n), sub(n > 1 ? n - 1 : 1);
  for (int k = 0; k < n; ++k) diag[k] = 2.0 * k + alpha + 1.0;
  for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k * (k + alpha));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 0)), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    fail(errc::quadrature_non_convergent, "Golub-Welsch eigen decomposition failed");

  // Weights from the derivative formula
  //   w_i = Gamma(n+alpha+1) x_i / (n! (n+1)^2 [L_{n+1}^{(alpha)}(x_i)]^2),
  // evaluated in logs. The eigenvector route would square first-components
  // that underflow at the far nodes; their absolute rounding error, scaled
  // by the exponentially large polynomial values there, ruins high-degree
  // integrands. The log route keeps every weight relatively accurate.
  const double lead = std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0) -
                      2.0 * std::log(n + 1.0);
  QuadRule rule;
  rule.alpha = alpha;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < n; ++i) {
    const double x = es.eigenvalues()[i];
    rule.x[i] = x;
    rule.w[i] = std::exp(lead + std::log(x) - 2.0 * log_abs_laguerre(n + 1, alpha, x));
  }
  return rule;
}

// 15-point Gauss-Legendre on [-1, 1].
constexpr int kGL = 15;
constexpr double kGLx[kGL] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601701,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGLw[kGL] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double panels_integrate(const Fn& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double acc = 0.0;
    for (int i = 0; i < kGL; ++i) acc += kGLw[i] * f(mid + 0.5 * h * kGLx[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

}  // namespace

const QuadRule& gauss_gen_laguerre(int n, double alpha) {
  static std::mutex mtx;
  static std::map<std::pair<int, double>, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(n, alpha);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, build_rule(n, alpha)).first;
  return it->second;
}

double integrate_interval(const Fn& f, double a, double b, double rel_tol, double abs_tol) {
  if (!(b > a)) return 0.0;
  int panels = 4;
  double prev = panels_integrate(f, a, b, panels);
  for (int iter = 0; iter < 12; ++iter) {
    panels *= 2;
    const double cur = panels_integrate(f, a, b, panels);
    const double scale = std::max({std::abs(cur), std::abs(prev), 1e-300});
    if (std::abs(cur - prev) <= std::max(rel_tol * scale, abs_tol)) return cur;
    prev = cur;
  }
  fail(errc::quadrature_non_convergent, "interval quadrature did not converge");
}

}  // namespace hmflow
