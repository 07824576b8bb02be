#ifndef HMFLOW_QUADRATURE_HPP
#define HMFLOW_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace hmflow {

using Fn = std::function<double(double)>;

/// Nodes and weights for \int_0^inf f(X) X^alpha e^{-X} dX.
struct QuadRule {
  double alpha = 0.0;
  std::vector<double> x;
  std::vector<double> w;
};

/// Generalized Gauss-Laguerre rule, computed by Golub-Welsch and cached
/// per (n, alpha).
const QuadRule& gauss_gen_laguerre(int n, double alpha);

/// Adaptive integral of f over [a, b] (finite endpoints), composite
/// Gauss-Legendre with panel doubling.
double integrate_interval(const Fn& f, double a, double b, double rel_tol = 1e-10,
                          double abs_tol = 0.0);

}  // namespace hmflow

#endif
