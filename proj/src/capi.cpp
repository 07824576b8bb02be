#include "hmflow.h"

#include <cmath>
#include <cstring>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "fitting.hpp"
#include "solver.hpp"
#include "spectral.hpp"
#include "stationary.hpp"
#include "verify.hpp"

using namespace hmflow;

namespace {

thread_local std::string g_last_error;

int classify(errc c) {
  switch (c) {
    case errc::invalid_argument:
    case errc::dimension_too_small:
    case errc::domain_error:
    case errc::index_out_of_range:
    case errc::spec_violation:
      return HMF_EINVAL;
    case errc::neutral_mode:
    case errc::negative_mode:
      return HMF_ESCOPE;
    default:
      return HMF_ENUMERIC;
  }
}

template <class F>
int guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return HMF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return classify(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return HMF_ENUMERIC;
  }
}

}  // namespace

struct hmf_stationary {
  StationaryProfile profile;
};

struct hmf_qprofile {
  QProfile profile;
};

struct hmf_initial_data {
  EigenfunctionBasis basis;
  std::optional<InitialData> data;
};

struct hmf_sim {
  int d = 0;
  SimResult result;
};

struct hmf_diag {
  int d = 0, l = 0, n_max = 0;
  EigenfunctionBasis basis;
  std::vector<Checkpoint> checkpoints;
  DiagnosticsResult result;
  bool ran = false;
};

extern "C" {

const char* hmf_last_error(void) { return g_last_error.c_str(); }

int hmf_spectrum(int d, int n_max, double* gamma, double* omega, double* lambda, double* norm,
                 double* origin, double* infinity) {
  return guarded([&] {
    if (n_max < 0) fail(errc::invalid_argument, "n_max must be nonnegative");
    const SpectralConstants c = compute_constants(d);
    const EigenfunctionBasis basis = EigenfunctionBasis::build(c, n_max);
    if (gamma) *gamma = c.gamma;
    if (omega) *omega = c.omega;
    for (int n = 0; n <= n_max; ++n) {
      if (lambda) lambda[n] = eigenvalue(c, n);
      if (norm) norm[n] = basis.normalization(n);
      if (origin) origin[n] = basis.origin_coeff(n);
      if (infinity) infinity[n] = basis.infinity_coeff(n);
    }
  });
}

int hmf_eigenfunction_eval(int d, int n, double y, double* value) {
  return guarded([&] {
    const SpectralConstants c = compute_constants(d);
    const EigenfunctionBasis basis = EigenfunctionBasis::build(c, n);
    *value = basis.eval(n, y);
  });
}

int hmf_predict(int d, int l, double* gamma, double* lambda_l, double* omega_l, double* exponent) {
  return guarded([&] {
    const RatePrediction p = predict_exponent(d, l);
    if (gamma) *gamma = p.gamma;
    if (lambda_l) *lambda_l = p.lambda_l;
    if (omega_l) *omega_l = p.omega_l;
    if (exponent) *exponent = p.exponent;
  });
}

int hmf_stationary_solve(int d, double alpha, double xi_max, hmf_stationary** out) {
  return guarded([&] {
    const SpectralConstants c = compute_constants(d);
    auto* h = new hmf_stationary{solve_stationary(c, alpha, xi_max)};
    try {
      extract_h(h->profile);
    } catch (...) {
      delete h;
      throw;
    }
    *out = h;
  });
}

void hmf_stationary_free(hmf_stationary* h) { delete h; }

int hmf_stationary_size(const hmf_stationary* h) { return int(h->profile.xi.size()); }

int hmf_stationary_data(const hmf_stationary* h, double* xi, double* u, double* du) {
  return guarded([&] {
    const StationaryProfile& p = h->profile;
    for (std::size_t i = 0; i < p.xi.size(); ++i) {
      if (xi) xi[i] = p.xi[i];
      if (u) u[i] = p.u[i];
      if (du) du[i] = p.du[i];
    }
  });
}

int hmf_stationary_eval(const hmf_stationary* h, double xi, double* u) {
  return guarded([&] { *u = h->profile.eval(xi); });
}

int hmf_stationary_tail(const hmf_stationary* h, double* h_est, double* h_corr, double* residual) {
  return guarded([&] {
    if (h_est) *h_est = h->profile.h_estimate;
    if (h_corr) *h_corr = h->profile.h_correction;
    if (residual) *residual = h->profile.fit_residual;
  });
}

int hmf_qprofile_solve(const hmf_stationary* u, double beta, double omega_l, double delta,
                       hmf_qprofile** out) {
  return guarded([&] { *out = new hmf_qprofile{solve_q_profile(u->profile, beta, omega_l, delta)}; });
}

void hmf_qprofile_free(hmf_qprofile* h) { delete h; }

int hmf_qprofile_size(const hmf_qprofile* h) { return int(h->profile.xi.size()); }

int hmf_qprofile_data(const hmf_qprofile* h, double* xi, double* q) {
  return guarded([&] {
    for (std::size_t i = 0; i < h->profile.xi.size(); ++i) {
      if (xi) xi[i] = h->profile.xi[i];
      if (q) q[i] = h->profile.q[i];
    }
  });
}

int hmf_qprofile_tail_slope(const hmf_qprofile* h, double* slope) {
  return guarded([&] { *slope = h->profile.tail_slope(); });
}

int hmf_initial_data_create(int d, int l, double s0, const double* q, int nq,
                            hmf_initial_data** out) {
  return guarded([&] {
    std::vector<double> qv;
    if (q && nq > 0) qv.assign(q, q + nq);
    InitialDataSpec spec = InitialDataSpec::make(d, l, s0, qv);
    const SpectralConstants c = compute_constants(d);
    StationaryProfile u1 = solve_stationary(c, 1.0, 1000.0);
    extract_h(u1);
    auto h = std::make_unique<hmf_initial_data>();
    h->basis = EigenfunctionBasis::build(c, std::max(l, 10));
    h->data.emplace(spec, h->basis, std::move(u1));
    *out = h.release();
  });
}

void hmf_initial_data_free(hmf_initial_data* h) { delete h; }

int hmf_initial_data_eval(const hmf_initial_data* h, double y, double* psi) {
  return guarded([&] { *psi = h->data->eval(y); });
}

int hmf_initial_data_info(const hmf_initial_data* h, double* alpha, double* inner_edge,
                          double* outer_edge, double* h_est) {
  return guarded([&] {
    const InitialDataSpec& sp = h->data->spec();
    if (alpha) *alpha = sp.alpha;
    if (inner_edge) *inner_edge = sp.inner_edge;
    if (outer_edge) *outer_edge = sp.outer_edge;
    if (h_est) *h_est = h->data->stationary().h_estimate;
  });
}

int hmf_initial_data_epsilon(const hmf_initial_data* h, double s, double* eps) {
  return guarded([&] {
    const InitialDataSpec& sp = h->data->spec();
    *eps = predict_epsilon(sp.a_l0, h->basis.origin_coeff(sp.l), h->data->stationary().h_estimate,
                           sp.pred, s);
  });
}

int hmf_initial_data_mismatch(const hmf_initial_data* h, double s, double eps_override,
                              double* mismatch) {
  return guarded([&] {
    const std::vector<double> grid{1.0};  // mismatch only; profile grid minimal
    const CompositeResult r = composite_profile(s, h->data->spec(), h->basis, h->data->stationary(),
                                                grid, eps_override);
    *mismatch = r.overlap_mismatch;
  });
}

void hmf_sim_params_defaults(hmf_sim_params* p) {
  p->r_max = 0.0;  // auto: sized from the data
  p->grid_ratio = 1.05;
  p->n_inner = 32;
  p->stop_threshold = 1e6;
  p->t_max = 10.0;
  p->dt_max = 1e-3;
  p->reaction_dt_factor = 0.2;
}

namespace {

SimParams to_params(int d, const hmf_sim_params* cp, double auto_r_max) {
  SimParams p;
  p.constants = compute_constants(d);
  hmf_sim_params def;
  hmf_sim_params_defaults(&def);
  const hmf_sim_params& c = cp ? *cp : def;
  p.r_max = (c.r_max > 0.0) ? c.r_max : auto_r_max;
  p.grid_ratio = c.grid_ratio;
  p.n_inner = c.n_inner;
  p.stop_threshold = c.stop_threshold;
  p.t_max = c.t_max;
  p.dt_max = c.dt_max;
  p.reaction_dt_factor = c.reaction_dt_factor;
  return p;
}

}  // namespace

int hmf_simulate_initial_data(const hmf_initial_data* id, const hmf_sim_params* p, hmf_sim** out) {
  return guarded([&] {
    const InitialDataSpec& sp = id->data->spec();
    const SimParams params = to_params(sp.d, p, sp.outer_edge * 1.1);
    Fn u0 = [id](double r) { return id->data->eval(r) + M_PI_2; };
    *out = new hmf_sim{sp.d, run_simulation(u0, params)};
  });
}

int hmf_simulate_samples(int d, const double* r, const double* u, int n, const hmf_sim_params* p,
                         hmf_sim** out) {
  return guarded([&] {
    if (!r || !u || n < 4) fail(errc::invalid_argument, "need at least 4 samples");
    RadialProfile prof;
    prof.variable = RadialProfile::Var::r;
    // the interpolant wants a positive grid; a leading r = 0 sample is
    // covered by the linear segment below the first positive node
    const int skip = (r[0] == 0.0) ? 1 : 0;
    prof.grid.assign(r + skip, r + n);
    prof.values.assign(u + skip, u + n);
    if (prof.grid.size() < 4) fail(errc::invalid_argument, "need at least 4 samples");
    const Fn f = interpolant(prof);
    const double r0 = prof.grid.front(), u0v = prof.values.front();
    Fn u0 = [f, r0, u0v](double x) { return x < r0 ? u0v * (x / r0) : f(x); };
    const SimParams params = to_params(d, p, prof.grid.back());
    *out = new hmf_sim{d, run_simulation(u0, params)};
  });
}

void hmf_sim_free(hmf_sim* h) { delete h; }

int hmf_sim_status(const hmf_sim* h) {
  return h->result.status == SimResult::Status::blowup ? 1 : 0;
}

long long hmf_sim_steps(const hmf_sim* h) { return h->result.steps; }

int hmf_sim_series_size(const hmf_sim* h) { return int(h->result.times.size()); }

int hmf_sim_series(const hmf_sim* h, double* t, double* grad) {
  return guarded([&] {
    for (std::size_t i = 0; i < h->result.times.size(); ++i) {
      if (t) t[i] = h->result.times[i];
      if (grad) grad[i] = h->result.grads[i];
    }
  });
}

int hmf_sim_checkpoint_count(const hmf_sim* h) { return int(h->result.checkpoints.size()); }

int hmf_sim_checkpoint_size(const hmf_sim* h, int k) {
  if (k < 0 || k >= int(h->result.checkpoints.size())) return -1;
  return int(h->result.checkpoints[k].r.size());
}

int hmf_sim_checkpoint(const hmf_sim* h, int k, double* t, double* grad, double* r, double* phi) {
  return guarded([&] {
    if (k < 0 || k >= int(h->result.checkpoints.size()))
      fail(errc::index_out_of_range, "checkpoint index out of range");
    const Checkpoint& cp = h->result.checkpoints[k];
    if (t) *t = cp.t;
    if (grad) *grad = cp.grad;
    for (std::size_t i = 0; i < cp.r.size(); ++i) {
      if (r) r[i] = cp.r[i];
      if (phi) phi[i] = cp.phi[i];
    }
  });
}

int hmf_fit_series(const double* t, const double* g, int n, double p0_seed, double* T, double* p,
                   double* C, double* residual, int* classification) {
  return guarded([&] {
    if (!t || !g || n < 8) fail(errc::invalid_argument, "series too short");
    FitOptions opt;
    if (p0_seed > 0.0) opt.p0 = p0_seed;
    const BlowupFit fit =
        detect_blowup_and_fit(std::vector<double>(t, t + n), std::vector<double>(g, g + n), opt);
    if (T) *T = fit.T;
    if (p) *p = fit.p;
    if (C) *C = fit.C;
    if (residual) *residual = fit.residual;
    if (classification)
      *classification = fit.classification == BlowupFit::Class::TypeI    ? 0
                        : fit.classification == BlowupFit::Class::TypeII ? 1
                                                                         : 2;
  });
}

int hmf_diag_create(int d, int l, int n_max, hmf_diag** out) {
  return guarded([&] {
    const SpectralConstants c = compute_constants(d);
    auto* h = new hmf_diag;
    h->d = d;
    h->l = l;
    h->n_max = n_max;
    h->basis = EigenfunctionBasis::build(c, n_max);
    *out = h;
  });
}

void hmf_diag_free(hmf_diag* h) { delete h; }

int hmf_diag_add_checkpoint(hmf_diag* h, double t, const double* r, const double* phi, int n) {
  return guarded([&] {
    if (!r || !phi || n < 4) fail(errc::invalid_argument, "checkpoint too small");
    Checkpoint cp;
    cp.t = t;
    cp.r.assign(r, r + n);
    cp.phi.assign(phi, phi + n);
    cp.grad = std::abs(cp.phi.front());
    h->checkpoints.push_back(std::move(cp));
    h->ran = false;
  });
}

int hmf_diag_run(hmf_diag* h, double T_est, double window, double skip) {
  return guarded([&] {
    DiagnosticsOptions opt;
    if (window > 0.0) opt.window = window;
    if (skip >= 0.0) opt.skip = skip;
    h->result = similarity_diagnostics(h->checkpoints, T_est, h->basis, h->l, opt);
    h->ran = true;
  });
}

int hmf_diag_size(const hmf_diag* h) { return h->ran ? int(h->result.s.size()) : 0; }

int hmf_diag_series(const hmf_diag* h, double* s, double* a) {
  return guarded([&] {
    if (!h->ran) fail(errc::invalid_argument, "diagnostics not run yet");
    for (std::size_t k = 0; k < h->result.s.size(); ++k) {
      if (s) s[k] = h->result.s[k];
      if (a)
        for (int n = 0; n <= h->n_max; ++n) a[k * (h->n_max + 1) + n] = h->result.a[k][n];
    }
  });
}

int hmf_diag_slope(const hmf_diag* h, double* slope) {
  return guarded([&] {
    if (!h->ran) fail(errc::invalid_argument, "diagnostics not run yet");
    *slope = h->result.slope_l;
  });
}

int hmf_diag_strip(const hmf_diag* h, int* ok, double* violation) {
  return guarded([&] {
    if (!h->ran) fail(errc::invalid_argument, "diagnostics not run yet");
    if (ok) *ok = h->result.strip_ok ? 1 : 0;
    if (violation) *violation = h->result.strip_violation;
  });
}

int hmf_verify(int full, char* buf, size_t cap) {
  bool all_ok = true;
  std::ostringstream os;
  try {
    for (const CheckResult& r : run_verification(full != 0)) {
      os << (r.passed ? "PASS " : "FAIL ") << r.name;
      if (!r.detail.empty()) os << ": " << r.detail;
      os << "\n";
      all_ok = all_ok && r.passed;
    }
  } catch (const std::exception& e) {
    os << "FAIL suite: " << e.what() << "\n";
    all_ok = false;
  }
  if (buf && cap > 0) {
    const std::string s = os.str();
    const size_t n = std::min(cap - 1, s.size());
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return all_ok ? HMF_OK : HMF_ENUMERIC;
}

}  // extern "C"
