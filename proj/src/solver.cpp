#include "solver.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"

namespace hmflow {

double nonlinearity_g(double x) {
  const double ax = std::abs(x);
  if (ax < 1e-2) {
    const double x2 = x * x;
    return 1.0 / 6.0 - x2 / 120.0 + x2 * x2 / 5040.0;
  }
  return (x - std::sin(x)) / (x * x * x);
}

void SimParams::validate() const {
  if (constants.d < 7) fail(errc::dimension_too_small, "solver constants not initialized");
  if (!(grid_ratio > 1.0 && grid_ratio < 2.0)) fail(errc::invalid_argument, "grid ratio out of range");
  if (n_inner < 4) fail(errc::invalid_argument, "inner resolution too coarse");
  if (!(r_max > 0.0) || !(t_max > 0.0)) fail(errc::invalid_argument, "domain parameters must be positive");
  if (!(reaction_dt_factor > 0.0 && reaction_dt_factor <= 0.5))
    fail(errc::cfl_violation, "explicit reaction factor must lie in (0, 1/2]");
  if (!(remesh_growth > 1.0)) fail(errc::invalid_argument, "remesh growth factor must exceed 1");
}

void SimState::validate() const {
  if (r.size() != phi.size() || r.size() < 4) fail(errc::invalid_argument, "state arrays malformed");
  if (r.front() != 0.0) fail(errc::invalid_argument, "state grid must start at the origin");
  for (std::size_t i = 1; i < r.size(); ++i)
    if (!(r[i] > r[i - 1])) fail(errc::domain_error, "state grid must be strictly increasing");
  for (double v : phi)
    if (!std::isfinite(v)) fail(errc::domain_error, "state values must be finite");
}

namespace {

// Monotone cubic (Fritsch-Carlson) interpolation on raw arrays; unlike the
// profile interpolant this admits x[0] = 0.
double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& m, double t) {
  if (t <= x.front()) return y.front();
  if (t >= x.back()) return y.back();
  auto it = std::upper_bound(x.begin(), x.end(), t);
  const std::size_t i = (it - x.begin()) - 1;
  const double h = x[i + 1] - x[i], u = (t - x[i]) / h;
  const double u2 = u * u, u3 = u2 * u;
  return y[i] * (2 * u3 - 3 * u2 + 1) + m[i] * h * (u3 - 2 * u2 + u) +
         y[i + 1] * (-2 * u3 + 3 * u2) + m[i + 1] * h * (u3 - u2);
}

std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> h(n - 1), delta(n - 1), m(n, 0.0);
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
      const double w1 = 2 * h[i] + h[i - 1], w2 = h[i] + 2 * h[i - 1];
      m[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  return m;
}

struct Geometry {
  int D;                       // ambient dimension of the regularized Laplacian
  std::vector<double> face;    // face radii, face[i] between nodes i, i+1
  std::vector<double> area;    // face[i]^{D-1}
  std::vector<double> vol;     // cell volumes
  std::vector<double> dr;      // node spacings

  explicit Geometry(const std::vector<double>& r, int d) : D(d + 2) {
    const std::size_t n = r.size();
    face.resize(n - 1);
    area.resize(n - 1);
    dr.resize(n - 1);
    vol.resize(n);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      face[i] = 0.5 * (r[i] + r[i + 1]);
      area[i] = std::pow(face[i], D - 1);
      dr[i] = r[i + 1] - r[i];
    }
    double prev = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double f = std::pow(face[i], D) / D;
      vol[i] = f - prev;
      prev = f;
    }
    vol[n - 1] = std::pow(r[n - 1], D) / D - prev;  // unused: Dirichlet node
  }
};

double reaction(int d, double r, double phi) {
  return 4.0 * (d - 1) * phi * phi * phi * nonlinearity_g(2.0 * r * phi);
}

double reaction_jacobian(int d, double r, double phi) {
  const double x = r * phi;
  const double s = (std::abs(x) < 1e-8) ? phi : std::sin(x) / r;
  return 2.0 * (d - 1) * s * s;
}

void thomas_solve(std::vector<double>& sub, std::vector<double>& diag, std::vector<double>& sup,
                  std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

int nodes_below_inner(const SimState& s, const SimParams& p) {
  const double g = s.origin_gradient();
  if (!(g > 0.0)) return p.n_inner * 2;
  const double inner = p.c_inner / g;
  int count = 0;
  for (std::size_t i = 1; i < s.r.size() && s.r[i] < inner; ++i) ++count;
  return count;
}

}  // namespace

std::vector<double> build_grid(const SimParams& p, double grad0) {
  const double g = std::max(std::abs(grad0), 1e-8);
  const double inner = std::min(p.c_inner / g, p.r_max);
  // Uniform cells across the steep region (2 n_inner of them, so a 2x
  // gradient growth still leaves n_inner resolved cells), then geometric
  // growth of the spacing itself out to the boundary.
  const double h0 = inner / (2.0 * p.n_inner);
  std::vector<double> r{0.0};
  double h = h0;
  while (r.back() + 1.25 * h < p.r_max) {
    r.push_back(r.back() + h);
    if (r.back() >= inner) h *= p.grid_ratio;
  }
  r.push_back(p.r_max);
  return r;
}

SimState initial_state(const Fn& u0, const SimParams& p) {
  p.validate();
  // Estimate the origin gradient to size the first grid.
  double probe = 1e-6, g0 = 0.0;
  for (int it = 0; it < 60; ++it) {
    g0 = u0(probe) / probe;
    const double g2 = u0(2.0 * probe) / (2.0 * probe);
    if (std::abs(g2 - g0) < 1e-6 * std::max(1.0, std::abs(g0))) break;
    probe *= 0.5;
  }
  SimState s;
  s.r = build_grid(p, g0);
  s.phi.resize(s.r.size());
  s.phi[0] = u0(s.r[1] * 1e-3) / (s.r[1] * 1e-3);
  for (std::size_t i = 1; i < s.r.size(); ++i) s.phi[i] = u0(s.r[i]) / s.r[i];
  s.t = 0.0;
  s.dt = p.dt_init;
  s.validate();
  return s;
}

double stable_dt(const SimState& s, const SimParams& p) {
  const int d = p.constants.d;
  double jmax = 0.0;
  for (std::size_t i = 0; i < s.r.size(); ++i)
    jmax = std::max(jmax, reaction_jacobian(d, s.r[i], s.phi[i]));
  const double dt = (jmax > 0.0) ? p.reaction_dt_factor / jmax : p.dt_max;
  return std::min(dt, p.dt_max);
}

namespace {

SimState step_with_geometry(const SimState& s, const SimParams& p, double dt,
                            const Geometry& geo) {
  if (!(dt > 0.0)) fail(errc::invalid_argument, "time step must be positive");
  if (dt < p.dt_min)
    fail(errc::step_size_underflow, "time step below resolution budget; blow-up reached");
  const int d = p.constants.d;
  const std::size_t n = s.r.size();

  std::vector<double> sub(n, 0.0), diag(n, 1.0), sup(n, 0.0), rhs(n);
  // Explicit reaction.
  for (std::size_t i = 0; i < n; ++i) rhs[i] = s.phi[i] + dt * reaction(d, s.r[i], s.phi[i]);
  // Implicit diffusion rows: origin node has a right flux only, the outer
  // node is Dirichlet.
  {
    const double c = dt * geo.area[0] / (geo.dr[0] * geo.vol[0]);
    diag[0] = 1.0 + c;
    sup[0] = -c;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double cr = dt * geo.area[i] / (geo.dr[i] * geo.vol[i]);
    const double cl = dt * geo.area[i - 1] / (geo.dr[i - 1] * geo.vol[i]);
    diag[i] = 1.0 + cl + cr;
    sub[i] = -cl;
    sup[i] = -cr;
  }
  rhs[n - 1] = s.phi[n - 1];

  thomas_solve(sub, diag, sup, rhs);

  SimState out = s;
  out.phi = std::move(rhs);
  out.t += dt;
  out.dt = dt;
  for (double v : out.phi)
    if (!std::isfinite(v)) fail(errc::integration_blowup, "solver state became non-finite");
  return out;
}

}  // namespace

SimState step_fixed(const SimState& s, const SimParams& p, double dt) {
  return step_with_geometry(s, p, dt, Geometry(s.r, p.constants.d));
}

SimState remesh(const SimState& s, const SimParams& p) {
  // Nested refinement: keep every existing node (so the solution there is
  // untouched and the gradient series stays smooth across remesh events) and
  // split cells that have become too coarse for the shrinking inner scale.
  const double g = s.origin_gradient();
  const double inner = p.c_inner / std::max(g, 1e-8);
  const double h_target = inner / (2.0 * p.n_inner);
  SimState out;
  out.r.reserve(s.r.size() + 2 * p.n_inner);
  out.phi.reserve(s.r.size() + 2 * p.n_inner);
  const std::vector<double> m = pchip_slopes(s.r, s.phi);
  for (std::size_t i = 0; i + 1 < s.r.size(); ++i) {
    out.r.push_back(s.r[i]);
    out.phi.push_back(s.phi[i]);
    if (s.r[i + 1] <= 2.0 * inner && s.r[i + 1] - s.r[i] > 1.5 * h_target) {
      const double mid = 0.5 * (s.r[i] + s.r[i + 1]);
      out.r.push_back(mid);
      out.phi.push_back(pchip_eval(s.r, s.phi, m, mid));
    }
  }
  out.r.push_back(s.r.back());
  out.phi.push_back(s.phi.back());
  out.t = s.t;
  out.dt = s.dt;
  out.refinement_level = s.refinement_level + 1;
  return out;
}

SimState step(const SimState& s, const SimParams& p) {
  const SimState* cur = &s;
  SimState refined;
  if (p.allow_remesh && nodes_below_inner(s, p) < p.n_inner) {
    refined = remesh(s, p);
    cur = &refined;
  }
  return step_fixed(*cur, p, stable_dt(*cur, p));
}

SimResult run_simulation(SimState state, const SimParams& p) {
  p.validate();
  state.validate();
  SimResult res;
  double next_record = 0.0, next_checkpoint = 0.0, next_t_record = 0.0;
  const double t_stride = p.t_max / 4096.0;

  auto record = [&](const SimState& s) {
    const double g = s.origin_gradient();
    if (g >= next_record || s.t >= next_t_record || res.times.empty()) {
      res.times.push_back(s.t);
      res.grads.push_back(g);
      next_record = g * p.record_ratio;
      next_t_record = s.t + t_stride;
    }
    if (g >= next_checkpoint || res.checkpoints.empty()) {
      res.checkpoints.push_back({s.t, g, s.r, s.phi});
      next_checkpoint = std::max(g, 1e-12) * p.checkpoint_ratio;
    }
  };

  record(state);
  Geometry geo(state.r, p.constants.d);
  while (state.t < p.t_max) {
    if (state.origin_gradient() >= p.stop_threshold) {
      res.status = SimResult::Status::blowup;
      break;
    }
    try {
      if (p.allow_remesh && nodes_below_inner(state, p) < p.n_inner) {
        state = remesh(state, p);
        geo = Geometry(state.r, p.constants.d);
      }
      state = step_with_geometry(state, p, stable_dt(state, p), geo);
    } catch (const Error& e) {
      if (e.code() == errc::step_size_underflow) {
        res.status = SimResult::Status::blowup;
        break;
      }
      throw;
    }
    ++res.steps;
    record(state);
  }
  if (state.origin_gradient() >= p.stop_threshold) res.status = SimResult::Status::blowup;
  res.final_state = std::move(state);
  return res;
}

SimResult run_simulation(const Fn& u0, const SimParams& p) {
  return run_simulation(initial_state(u0, p), p);
}

}  // namespace hmflow
