#ifndef HMFLOW_SEMIGROUP_HPP
#define HMFLOW_SEMIGROUP_HPP

#include <vector>

#include "spectral.hpp"

namespace hmflow {

/// Eigen-expansion coefficients a_n = <v, phi_n> at similarity time s.
struct ModeCoefficients {
  const EigenfunctionBasis* basis = nullptr;
  std::vector<double> a;
  double s = 0.0;
};

ModeCoefficients decompose(const Fn& v, const EigenfunctionBasis& basis, double s = 0.0,
                           const QuadOptions& opt = {});

/// e^{-sA} at coefficient level: a_n -> e^{-lambda_n s} a_n. The n=0
/// coefficient grows (lambda_0 = -gamma/2 < 0); that is correct and is
/// not clipped.
ModeCoefficients evolve(const ModeCoefficients& coeffs, double s_elapsed);

/// Pointwise reconstruction of the truncated eigen-expansion.
double reconstruct(const ModeCoefficients& coeffs, double y);

enum class Monotonicity { unknown, nonincreasing, nondecreasing };

struct MaximalOptions {
  int grid_points = 64;        // log-spaced endpoint candidates per side
  int refine_iters = 40;       // golden-section refinement of the best cell
  double quad_rel_tol = 1e-9;
};

/// Muckenhoupt maximal function: sup over intervals I containing y of the
/// average of |psi(x)| x^gamma against the weight x^{1+omega} e^{-x^2/4}.
/// When |psi| x^gamma is declared monotone the closed-form interval
/// ([0,y] or [y,inf)) is used; otherwise a log-spaced interval grid is
/// searched and the best cell refined.
double maximal_function(const Fn& psi, const SpectralConstants& c, double y,
                        Monotonicity hint = Monotonicity::unknown, const MaximalOptions& opt = {});

/// Max over the (s, y) sample grid of |e^{-sA}psi(y)| divided by
/// (y e^{-s/2})^{-gamma} (M psi)(y). Finiteness and grid-stability of this
/// ratio is the numerical content of the pointwise semigroup bound; the
/// implied constant is reported, never asserted.
double check_pointwise_bound(const ModeCoefficients& psi_coeffs, const std::vector<double>& s_values,
                             const std::vector<double>& y_values,
                             const MaximalOptions& opt = {});

}  // namespace hmflow

#endif
