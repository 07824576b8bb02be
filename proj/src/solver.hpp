#ifndef HMFLOW_SOLVER_HPP
#define HMFLOW_SOLVER_HPP

#include <vector>

#include "spectral.hpp"

namespace hmflow {

/// Stable evaluation of g(x) = (x - sin x)/x^3, always in (0, 1/6].
double nonlinearity_g(double x);

struct SimParams {
  SpectralConstants constants;
  double r_max = 100.0;
  double grid_ratio = 1.05;      // geometric cell growth
  int n_inner = 32;              // nodes below the inner scale c_inner/|Phi(0)|
  double c_inner = 1.0;
  double stop_threshold = 1e6;   // |Phi(0,t)| terminating the run
  double t_max = 10.0;
  double dt_init = 1e-6;
  double dt_max = 1e-3;
  double dt_min = 1e-18;
  double reaction_dt_factor = 0.2;  // dt <= factor / max|dF/dPhi|
  double remesh_growth = 2.0;       // refine when |Phi(0)| grows by this factor
  double checkpoint_ratio = 1.333521432163324;  // 10^(1/8) gradient spacing
  double record_ratio = 1.001;      // gradient series thinning
  bool allow_remesh = true;

  void validate() const;
};

/// Solution state in the regularized variable Phi = u/r. Node 0 sits at
/// r = 0 and carries the origin limit Phi(0) = u_r(0, t).
struct SimState {
  std::vector<double> r;    // r[0] == 0, strictly increasing
  std::vector<double> phi;
  double t = 0.0;
  double dt = 0.0;
  int refinement_level = 0;

  double origin_gradient() const { return phi.empty() ? 0.0 : std::abs(phi[0]); }
  void validate() const;
};

struct Checkpoint {
  double t = 0.0;
  double grad = 0.0;
  std::vector<double> r, phi;
};

struct SimResult {
  enum class Status { blowup, no_blowup };
  Status status = Status::no_blowup;
  SimState final_state;
  std::vector<double> times, grads;  // origin-gradient series
  std::vector<Checkpoint> checkpoints;
  long long steps = 0;
};

/// Grid with 2 n_inner uniform cells below the inner scale c_inner/|grad0|,
/// then geometric growth of the spacing by grid_ratio out to r_max. The
/// origin node is included.
std::vector<double> build_grid(const SimParams& p, double grad0);

/// Samples u0 (u-level, as a function of r) onto a fresh grid sized to its
/// origin gradient.
SimState initial_state(const Fn& u0, const SimParams& p);

/// Largest admissible reaction time step at the current state.
double stable_dt(const SimState& s, const SimParams& p);

/// One step with an externally fixed dt: reaction explicit, diffusion by
/// backward Euler (tridiagonal M-matrix, so the step is order preserving).
/// The outer boundary node is held fixed (Dirichlet). No remeshing.
SimState step_fixed(const SimState& s, const SimParams& p, double dt);

/// One adaptive step; remeshes first if the inner-resolution invariant fails.
SimState step(const SimState& s, const SimParams& p);

/// Nested refinement: keeps every node and splits cells near the origin
/// that have become too coarse for the current inner scale, so existing
/// values (and the gradient series) are not perturbed.
SimState remesh(const SimState& s, const SimParams& p);

SimResult run_simulation(const Fn& u0, const SimParams& p);
SimResult run_simulation(SimState state, const SimParams& p);

}  // namespace hmflow

#endif
