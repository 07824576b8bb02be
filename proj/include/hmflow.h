/* C interface to the equivariant harmonic map heat flow library.
 *
 * All functions return 0 on success or a nonzero error code; the thread's
 * last error message is available through hmf_last_error(). Handles are
 * opaque and must be released with the matching _free function. */
#ifndef HMFLOW_H
#define HMFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Error classes, matching the CLI exit-code contract. */
#define HMF_OK 0
#define HMF_EINVAL 2  /* invalid input */
#define HMF_ESCOPE 3  /* outside the covered regime (neutral/negative mode) */
#define HMF_ENUMERIC 4 /* runtime numerical failure */

const char* hmf_last_error(void);

/* ---- spectral data ---- */

/* gamma, omega for dimension d; lambda, norm, origin, infinity are caller
 * arrays of length n_max+1 (any may be NULL). */
int hmf_spectrum(int d, int n_max, double* gamma, double* omega, double* lambda, double* norm,
                 double* origin, double* infinity);

int hmf_eigenfunction_eval(int d, int n, double y, double* value);

/* Blow-up rate prediction for mode l: exponent p = l/gamma. */
int hmf_predict(int d, int l, double* gamma, double* lambda_l, double* omega_l, double* exponent);

/* ---- stationary profiles ---- */

typedef struct hmf_stationary hmf_stationary;

int hmf_stationary_solve(int d, double alpha, double xi_max, hmf_stationary** out);
void hmf_stationary_free(hmf_stationary* h);
int hmf_stationary_size(const hmf_stationary* h);
/* xi, u, du are caller arrays of hmf_stationary_size() entries (NULL ok). */
int hmf_stationary_data(const hmf_stationary* h, double* xi, double* u, double* du);
int hmf_stationary_eval(const hmf_stationary* h, double xi, double* u);
/* Tail plateau of (pi/2 - U) xi^gamma and the fit residual. */
int hmf_stationary_tail(const hmf_stationary* h, double* h_est, double* h_corr, double* residual);

typedef struct hmf_qprofile hmf_qprofile;

int hmf_qprofile_solve(const hmf_stationary* u, double beta, double omega_l, double delta,
                       hmf_qprofile** out);
void hmf_qprofile_free(hmf_qprofile* h);
int hmf_qprofile_size(const hmf_qprofile* h);
int hmf_qprofile_data(const hmf_qprofile* h, double* xi, double* q);
int hmf_qprofile_tail_slope(const hmf_qprofile* h, double* slope);

/* ---- matched-asymptotics initial data ---- */

typedef struct hmf_initial_data hmf_initial_data;

/* q is an array of l lower-mode amplitudes (NULL means all zero). */
int hmf_initial_data_create(int d, int l, double s0, const double* q, int nq,
                            hmf_initial_data** out);
void hmf_initial_data_free(hmf_initial_data* h);
/* psi_{0,q}(y); add pi/2 for the u-level value. */
int hmf_initial_data_eval(const hmf_initial_data* h, double y, double* psi);
int hmf_initial_data_info(const hmf_initial_data* h, double* alpha, double* inner_edge,
                          double* outer_edge, double* h_est);
int hmf_initial_data_epsilon(const hmf_initial_data* h, double s, double* eps);
/* Max relative inner/outer mismatch over the overlap window at time s;
 * eps_override > 0 replaces the matched boundary-layer width. */
int hmf_initial_data_mismatch(const hmf_initial_data* h, double s, double eps_override,
                              double* mismatch);

/* ---- PDE solver ---- */

typedef struct hmf_sim_params {
  double r_max;
  double grid_ratio;
  int n_inner;
  double stop_threshold;
  double t_max;
  double dt_max;
  double reaction_dt_factor;
} hmf_sim_params;

void hmf_sim_params_defaults(hmf_sim_params* p);

typedef struct hmf_sim hmf_sim;

/* Runs the flow for u0 = pi/2 + psi_{0,q} expressed in the y-variable. */
int hmf_simulate_initial_data(const hmf_initial_data* id, const hmf_sim_params* p, hmf_sim** out);
/* Runs the flow for sampled u-level data (monotone-cubic interpolated). */
int hmf_simulate_samples(int d, const double* r, const double* u, int n, const hmf_sim_params* p,
                         hmf_sim** out);
void hmf_sim_free(hmf_sim* h);

int hmf_sim_status(const hmf_sim* h); /* 1 blow-up reached, 0 no blow-up */
long long hmf_sim_steps(const hmf_sim* h);
int hmf_sim_series_size(const hmf_sim* h);
int hmf_sim_series(const hmf_sim* h, double* t, double* grad);
int hmf_sim_checkpoint_count(const hmf_sim* h);
int hmf_sim_checkpoint_size(const hmf_sim* h, int k);
int hmf_sim_checkpoint(const hmf_sim* h, int k, double* t, double* grad, double* r, double* phi);

/* ---- rate fitting and diagnostics ---- */

/* classification: 0 Type I, 1 Type II, 2 undetermined. */
int hmf_fit_series(const double* t, const double* g, int n, double p0_seed, double* T, double* p,
                   double* C, double* residual, int* classification);

typedef struct hmf_diag hmf_diag;

int hmf_diag_create(int d, int l, int n_max, hmf_diag** out);
void hmf_diag_free(hmf_diag* h);
int hmf_diag_add_checkpoint(hmf_diag* h, double t, const double* r, const double* phi, int n);
int hmf_diag_run(hmf_diag* h, double T_est, double window, double skip);
int hmf_diag_size(const hmf_diag* h);
/* a is row-major (hmf_diag_size() x (n_max+1)); s, a may be NULL. */
int hmf_diag_series(const hmf_diag* h, double* s, double* a);
int hmf_diag_slope(const hmf_diag* h, double* slope);
int hmf_diag_strip(const hmf_diag* h, int* ok, double* violation);

/* ---- verification suites ---- */

/* Returns 0 when every check passes, HMF_ENUMERIC otherwise; writes a
 * plain-text report into buf (truncated to cap bytes). */
int hmf_verify(int full, char* buf, size_t cap);

#ifdef __cplusplus
}
#endif

#endif /* HMFLOW_H */
