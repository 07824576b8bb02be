#ifndef HMFLOW_FITTING_HPP
#define HMFLOW_FITTING_HPP

#include <vector>

#include "solver.hpp"

namespace hmflow {

struct FitOptions {
  double p0 = 0.6;             // exponent guess used only to seed T
  double tail_decades = 3.5;   // trailing window size in decades of gradient
  double min_decades = 2.0;    // required gradient span inside the window
  double margin = 0.02;        // Type I/II classification margin on p
  double residual_gate = 0.05; // rms log-residual above which the fit is rejected
};

/// Power-law fit g(t) = C (T-t)^{-p} of an origin-gradient series.
struct BlowupFit {
  enum class Class { TypeI, TypeII, Undetermined };
  double T = 0.0;
  double p = 0.0;
  double C = 0.0;
  double residual = 0.0;
  Class classification = Class::Undetermined;
};

BlowupFit detect_blowup_and_fit(const std::vector<double>& t, const std::vector<double>& g,
                                const FitOptions& opt = {});

struct DiagnosticsOptions {
  double window = 6.0;     // s-length of the trailing regression window
  double skip = 0.5;       // minimum s-coverage beyond the window itself
  double strip_tol = 1e-6; // admissible excursion of |psi| beyond pi/2
  QuadOptions quad{300, 1e-10, false};
};

struct DiagnosticsResult {
  std::vector<double> s;               // similarity times of usable checkpoints
  std::vector<std::vector<double>> a;  // a[k][n]: n-th coefficient at s[k]
  std::vector<double> a_inf;           // quasi-steady background level per mode
                                       // (fitted for mode l, endpoint otherwise)
  double slope_l = 0.0;                // decay rate of a_l - a_inf[l] in s
  double slope_window_lo = 0.0, slope_window_hi = 0.0;
  bool strip_ok = false;
  double strip_violation = 0.0;        // max of |psi| - pi/2 over checkpoints
};

/// Maps checkpoints to similarity variables y = r/sqrt(T-t), psi = u - pi/2
/// at s = -log(T-t), projects each slice onto the eigenbasis and regresses
/// the decay of mode l over a window starting after the initial transient.
///
/// The slices do not tend to zero: the slowly varying outer field imposes a
/// small quasi-steady level on the similarity region (nearly constant in y,
/// hence scale-invariant), and every a_n converges to its projection. The
/// decaying eigenmode is the deviation from that background, which need not
/// have settled by the last checkpoint, so the window is taken from the end
/// of the run and a_l(s) = a_inf + A e^{slope_l * s} is fitted directly with
/// the background as a free parameter. Early checkpoints carry the collapse
/// transient and are excluded by construction.
DiagnosticsResult similarity_diagnostics(const std::vector<Checkpoint>& checkpoints, double T_est,
                                         const EigenfunctionBasis& basis, int l,
                                         const DiagnosticsOptions& opt = {});

}  // namespace hmflow

#endif
