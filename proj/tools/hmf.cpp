// Command-line front end for the harmonic map heat flow library.
//
// Subcommands: spectrum, predict, stationary, make-initial, simulate,
// diagnose, verify. Options may come from flags or from a flat key-value
// config file (section.key=value); flags win over file values, which win
// over defaults. Every output embeds the effective configuration.
//
// Exit codes: 0 ok, 2 invalid input, 3 outside the covered regime,
// 4 runtime numerical failure.
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmflow.h"
#include "json.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr const char* kVersion = "1.0.0";

int fail_with(int code, const std::string& op) {
  json rec{{"error", code}, {"op", op}, {"message", hmf_last_error()}};
  std::cerr << rec.dump() << "\n";
  return code;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Metadata comment lines placed above the CSV header row.
void csv_preamble(std::ostream& os, const json& config) {
  os << "# version: " << kVersion << "\n";
  os << "# config: " << config.dump() << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw CLI::ValidationError("--out", "cannot open '" + path + "' for writing");
  return os;
}

json report_skeleton(const json& config) {
  return json{{"version", kVersion}, {"config", config}};
}

// ---- spectrum -------------------------------------------------------------

struct SpectrumArgs {
  int d = 8;
  int n_max = 5;
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& a) {
  double gamma = 0, omega = 0;
  std::vector<double> lambda(a.n_max + 1), norm(a.n_max + 1), origin(a.n_max + 1),
      infinity(a.n_max + 1);
  const int rc = hmf_spectrum(a.d, a.n_max, &gamma, &omega, lambda.data(), norm.data(),
                              origin.data(), infinity.data());
  if (rc != HMF_OK) return fail_with(rc, "spectrum");
  const json config{{"d", a.d}, {"n_max", a.n_max}};
  std::ofstream file;
  if (!a.out.empty()) file = open_out(a.out);
  std::ostream& os = a.out.empty() ? std::cout : file;
  csv_preamble(os, config);
  os << "# gamma: " << num(gamma) << "\n# omega: " << num(omega) << "\n";
  os << "n,lambda,normalization,origin_coeff,infinity_coeff\n";
  for (int n = 0; n <= a.n_max; ++n)
    os << n << "," << num(lambda[n]) << "," << num(norm[n]) << "," << num(origin[n]) << ","
       << num(infinity[n]) << "\n";
  return 0;
}

// ---- predict --------------------------------------------------------------

struct PredictArgs {
  int d = 8;
  int l = 1;
};

int cmd_predict(const PredictArgs& a) {
  double gamma = 0, lambda_l = 0, omega_l = 0, p = 0;
  const int rc = hmf_predict(a.d, a.l, &gamma, &lambda_l, &omega_l, &p);
  if (rc != HMF_OK) return fail_with(rc, "predict");
  json rep = report_skeleton({{"d", a.d}, {"l", a.l}});
  rep["gamma"] = gamma;
  rep["lambda_l"] = lambda_l;
  rep["omega_l"] = omega_l;
  rep["exponent"] = p;
  rep["type_ii"] = p > 0.5;
  std::cout << rep.dump(2) << "\n";
  return 0;
}

// ---- stationary -----------------------------------------------------------

struct StationaryArgs {
  int d = 8;
  double alpha = 1.0;
  double xi_max = 1000.0;
  std::string out = "stationary.csv";
};

int cmd_stationary(const StationaryArgs& a) {
  hmf_stationary* h = nullptr;
  int rc = hmf_stationary_solve(a.d, a.alpha, a.xi_max, &h);
  if (rc != HMF_OK) return fail_with(rc, "stationary");
  const int n = hmf_stationary_size(h);
  std::vector<double> xi(n), u(n), du(n);
  hmf_stationary_data(h, xi.data(), u.data(), du.data());
  double h_est = 0, h_corr = 0, resid = 0;
  rc = hmf_stationary_tail(h, &h_est, &h_corr, &resid);
  hmf_stationary_free(h);
  if (rc != HMF_OK) return fail_with(rc, "stationary");

  const json config{{"d", a.d}, {"alpha", a.alpha}, {"xi_max", a.xi_max}, {"out", a.out}};
  auto os = open_out(a.out);
  csv_preamble(os, config);
  os << "# tail_h: " << num(h_est) << "\n# tail_h_correction: " << num(h_corr)
     << "\n# tail_residual: " << num(resid) << "\n";
  os << "xi,u,du\n";
  for (int i = 0; i < n; ++i) os << num(xi[i]) << "," << num(u[i]) << "," << num(du[i]) << "\n";
  std::cout << "wrote " << a.out << " (" << n << " rows, tail h = " << num(h_est) << ")\n";
  return 0;
}

// ---- make-initial ---------------------------------------------------------

struct MakeInitialArgs {
  int d = 8;
  int l = 1;
  double s0 = 20.0;
  std::vector<double> q;
  int samples = 2000;
  std::string out = "initial.csv";
};

int cmd_make_initial(const MakeInitialArgs& a) {
  hmf_initial_data* id = nullptr;
  int rc = hmf_initial_data_create(a.d, a.l, a.s0, a.q.empty() ? nullptr : a.q.data(),
                                   int(a.q.size()), &id);
  if (rc != HMF_OK) return fail_with(rc, "make-initial");
  double alpha = 0, inner = 0, outer = 0, h_est = 0;
  hmf_initial_data_info(id, &alpha, &inner, &outer, &h_est);

  json config{{"d", a.d}, {"l", a.l}, {"s0", a.s0}, {"q", a.q}, {"samples", a.samples},
              {"out", a.out}};
  auto os = open_out(a.out);
  csv_preamble(os, config);
  os << "# alpha: " << num(alpha) << "\n# inner_edge: " << num(inner)
     << "\n# outer_edge: " << num(outer) << "\n";
  os << "y,psi\n";
  const double y_lo = inner * 1e-3, y_hi = outer;
  const double step = std::pow(y_hi / y_lo, 1.0 / (a.samples - 1));
  double y = y_lo;
  for (int i = 0; i < a.samples; ++i, y *= step) {
    double psi = 0;
    if ((rc = hmf_initial_data_eval(id, y, &psi)) != HMF_OK) break;
    os << num(y) << "," << num(psi) << "\n";
  }
  hmf_initial_data_free(id);
  if (rc != HMF_OK) return fail_with(rc, "make-initial");
  std::cout << "wrote " << a.out << " (" << a.samples << " rows)\n";
  return 0;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  int d = 8;
  int l = 1;
  double s0 = 20.0;
  std::vector<double> q;
  hmf_sim_params p{};
  std::string out_dir = "run";
};

int cmd_simulate(const SimulateArgs& a) {
  hmf_initial_data* id = nullptr;
  int rc = hmf_initial_data_create(a.d, a.l, a.s0, a.q.empty() ? nullptr : a.q.data(),
                                   int(a.q.size()), &id);
  if (rc != HMF_OK) return fail_with(rc, "simulate");
  hmf_sim* sim = nullptr;
  rc = hmf_simulate_initial_data(id, &a.p, &sim);
  hmf_initial_data_free(id);
  if (rc != HMF_OK) return fail_with(rc, "simulate");

  const json config{{"d", a.d},
                    {"l", a.l},
                    {"s0", a.s0},
                    {"q", a.q},
                    {"r_max", a.p.r_max},
                    {"grid_ratio", a.p.grid_ratio},
                    {"n_inner", a.p.n_inner},
                    {"stop_threshold", a.p.stop_threshold},
                    {"t_max", a.p.t_max},
                    {"dt_max", a.p.dt_max},
                    {"reaction_dt_factor", a.p.reaction_dt_factor},
                    {"out_dir", a.out_dir}};
  fs::create_directories(a.out_dir);

  {
    const int n = hmf_sim_series_size(sim);
    std::vector<double> t(n), g(n);
    hmf_sim_series(sim, t.data(), g.data());
    auto os = open_out((fs::path(a.out_dir) / "series.csv").string());
    csv_preamble(os, config);
    os << "t,grad\n";
    for (int i = 0; i < n; ++i) os << num(t[i]) << "," << num(g[i]) << "\n";
  }

  const int n_cp = hmf_sim_checkpoint_count(sim);
  for (int k = 0; k < n_cp; ++k) {
    const int n = hmf_sim_checkpoint_size(sim, k);
    std::vector<double> r(n), phi(n);
    double t = 0, grad = 0;
    hmf_sim_checkpoint(sim, k, &t, &grad, r.data(), phi.data());
    char name[40];
    std::snprintf(name, sizeof name, "checkpoint_%03d.csv", k);
    auto os = open_out((fs::path(a.out_dir) / name).string());
    csv_preamble(os, config);
    os << "# t: " << num(t) << "\n# grad: " << num(grad) << "\n";
    os << "r,phi\n";
    for (int i = 0; i < n; ++i) os << num(r[i]) << "," << num(phi[i]) << "\n";
  }

  json rep = report_skeleton(config);
  rep["status"] = hmf_sim_status(sim) == 1 ? "blowup" : "no_blowup";
  rep["steps"] = hmf_sim_steps(sim);
  rep["series_size"] = hmf_sim_series_size(sim);
  rep["checkpoints"] = n_cp;
  hmf_sim_free(sim);
  {
    auto os = open_out((fs::path(a.out_dir) / "run.json").string());
    os << rep.dump(2) << "\n";
  }
  std::cout << rep.dump(2) << "\n";
  return 0;
}

// ---- diagnose -------------------------------------------------------------

struct DiagnoseArgs {
  std::string run_dir = "run";
  int n_max = 6;
  double p0 = 0.6;
  double window = 0.0;  // 0 keeps the library default
};

// Reads one CSV written by cmd_simulate: '#' metadata, header, two columns.
bool read_csv2(const fs::path& path, std::vector<double>& x, std::vector<double>& y,
               json* meta = nullptr) {
  std::ifstream is(path);
  if (!is) return false;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (meta) {
        const auto colon = line.find(": ");
        if (colon != std::string::npos)
          (*meta)[line.substr(2, colon - 2)] = line.substr(colon + 2);
      }
      continue;
    }
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    x.push_back(std::stod(line.substr(0, comma)));
    y.push_back(std::stod(line.substr(comma + 1)));
  }
  return header_seen;
}

int cmd_diagnose(const DiagnoseArgs& a) {
  const fs::path dir(a.run_dir);
  json run;
  {
    std::ifstream is(dir / "run.json");
    if (!is) throw CLI::ValidationError("--run-dir", "missing " + (dir / "run.json").string());
    is >> run;
  }
  const int d = run["config"]["d"], l = run["config"]["l"];

  std::vector<double> t, g;
  if (!read_csv2(dir / "series.csv", t, g))
    throw CLI::ValidationError("--run-dir", "missing or malformed series.csv");
  double T = 0, p = 0, C = 0, resid = 0;
  int cls = 2;
  int rc = hmf_fit_series(t.data(), g.data(), int(t.size()), a.p0, &T, &p, &C, &resid, &cls);
  if (rc != HMF_OK) return fail_with(rc, "diagnose");

  hmf_diag* diag = nullptr;
  rc = hmf_diag_create(d, l, a.n_max, &diag);
  if (rc != HMF_OK) return fail_with(rc, "diagnose");
  const int n_cp = run["checkpoints"];
  for (int k = 0; k < n_cp && rc == HMF_OK; ++k) {
    char name[40];
    std::snprintf(name, sizeof name, "checkpoint_%03d.csv", k);
    std::vector<double> r, phi;
    json meta;
    if (!read_csv2(dir / name, r, phi, &meta)) {
      hmf_diag_free(diag);
      throw CLI::ValidationError("--run-dir", std::string("missing or malformed ") + name);
    }
    rc = hmf_diag_add_checkpoint(diag, std::stod(meta["t"].get<std::string>()), r.data(),
                                 phi.data(), int(r.size()));
  }
  if (rc == HMF_OK) rc = hmf_diag_run(diag, T, a.window, -1.0);
  if (rc != HMF_OK) {
    hmf_diag_free(diag);
    return fail_with(rc, "diagnose");
  }
  double slope = 0, violation = 0;
  int strip_ok = 0;
  hmf_diag_slope(diag, &slope);
  hmf_diag_strip(diag, &strip_ok, &violation);
  hmf_diag_free(diag);

  double lambda_l = 0, p_pred = 0;
  hmf_predict(d, l, nullptr, &lambda_l, nullptr, &p_pred);

  json rep = report_skeleton({{"run_dir", a.run_dir}, {"n_max", a.n_max}, {"p0", a.p0},
                              {"window", a.window}});
  rep["fit"] = {{"T", T},
                {"p", p},
                {"C", C},
                {"residual", resid},
                {"classification", cls == 0 ? "type_i" : cls == 1 ? "type_ii" : "undetermined"}};
  rep["predicted_exponent"] = p_pred;
  rep["mode_slope"] = slope;
  rep["predicted_slope"] = -lambda_l;
  rep["strip_ok"] = strip_ok == 1;
  rep["strip_violation"] = violation;
  {
    auto os = open_out((dir / "diagnostics.json").string());
    os << rep.dump(2) << "\n";
  }
  std::cout << rep.dump(2) << "\n";
  return 0;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const std::string& level) {
  std::string buf(1 << 16, '\0');
  const int rc = hmf_verify(level == "full" ? 1 : 0, buf.data(), buf.size());
  buf.resize(std::strlen(buf.c_str()));
  std::cout << buf;
  if (rc != HMF_OK) return fail_with(rc, "verify");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivariant harmonic map heat flow toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key-value config file (section.key=value)");
  app.set_version_flag("--version", kVersion);

  SpectrumArgs sp;
  auto* c_sp = app.add_subcommand("spectrum", "Spectral constants and eigenvalue table");
  c_sp->add_option("--d", sp.d, "Dimension (>= 7)")->capture_default_str();
  c_sp->add_option("--n-max", sp.n_max, "Highest mode index")->capture_default_str();
  c_sp->add_option("--out", sp.out, "CSV path (stdout when empty)")->capture_default_str();

  PredictArgs pr;
  auto* c_pr = app.add_subcommand("predict", "Blow-up rate prediction for mode l");
  c_pr->add_option("--d", pr.d, "Dimension (>= 7)")->capture_default_str();
  c_pr->add_option("--l", pr.l, "Perturbed mode index")->capture_default_str();

  StationaryArgs st;
  auto* c_st = app.add_subcommand("stationary", "Solve a stationary profile");
  c_st->add_option("--d", st.d, "Dimension (>= 7)")->capture_default_str();
  c_st->add_option("--alpha", st.alpha, "Origin slope")->capture_default_str();
  c_st->add_option("--xi-max", st.xi_max, "Profile range")->capture_default_str();
  c_st->add_option("--out", st.out, "CSV path")->capture_default_str();

  MakeInitialArgs mi;
  auto* c_mi = app.add_subcommand("make-initial", "Construct matched initial data");
  c_mi->add_option("--d", mi.d, "Dimension (>= 8)")->capture_default_str();
  c_mi->add_option("--l", mi.l, "Perturbed mode index")->capture_default_str();
  c_mi->add_option("--s0", mi.s0, "Similarity start time")->capture_default_str();
  c_mi->add_option("--q", mi.q, "Lower-mode amplitudes q_1..q_{l-1}");
  c_mi->add_option("--samples", mi.samples, "Output sample count")->capture_default_str();
  c_mi->add_option("--out", mi.out, "CSV path")->capture_default_str();

  SimulateArgs si;
  hmf_sim_params_defaults(&si.p);
  auto* c_si = app.add_subcommand("simulate", "Evolve matched initial data to blow-up");
  c_si->add_option("--d", si.d, "Dimension (>= 8)")->capture_default_str();
  c_si->add_option("--l", si.l, "Perturbed mode index")->capture_default_str();
  c_si->add_option("--s0", si.s0, "Similarity start time")->capture_default_str();
  c_si->add_option("--q", si.q, "Lower-mode amplitudes q_1..q_{l-1}");
  c_si->add_option("--r-max", si.p.r_max, "Domain radius (0 = sized from the data)")
      ->capture_default_str();
  c_si->add_option("--grid-ratio", si.p.grid_ratio, "Geometric spacing growth")
      ->capture_default_str();
  c_si->add_option("--n-inner", si.p.n_inner, "Cells across the inner scale")
      ->capture_default_str();
  c_si->add_option("--stop-threshold", si.p.stop_threshold, "Origin-gradient stop value")
      ->capture_default_str();
  c_si->add_option("--t-max", si.p.t_max, "Time budget")->capture_default_str();
  c_si->add_option("--dt-max", si.p.dt_max, "Largest time step")->capture_default_str();
  c_si->add_option("--out-dir", si.out_dir, "Run directory")->capture_default_str();

  DiagnoseArgs di;
  auto* c_di = app.add_subcommand("diagnose", "Fit the rate and project checkpoints");
  c_di->add_option("--run-dir", di.run_dir, "Directory written by simulate")
      ->capture_default_str();
  c_di->add_option("--n-max", di.n_max, "Projection mode count")->capture_default_str();
  c_di->add_option("--p0", di.p0, "Exponent seed for the fit")->capture_default_str();
  c_di->add_option("--window", di.window, "Slope window length in s (0 = default)")
      ->capture_default_str();

  std::string level = "fast";
  auto* c_ve = app.add_subcommand("verify", "Run the built-in verification suite");
  c_ve->add_option("--level", level, "fast or full")
      ->check(CLI::IsMember({"fast", "full"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (c_sp->parsed()) return cmd_spectrum(sp);
    if (c_pr->parsed()) return cmd_predict(pr);
    if (c_st->parsed()) return cmd_stationary(st);
    if (c_mi->parsed()) return cmd_make_initial(mi);
    if (c_si->parsed()) return cmd_simulate(si);
    if (c_di->parsed()) return cmd_diagnose(di);
    if (c_ve->parsed()) return cmd_verify(level);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return HMF_EINVAL;
  } catch (const std::exception& e) {
    json rec{{"error", HMF_EINVAL}, {"message", e.what()}};
    std::cerr << rec.dump() << "\n";
    return HMF_EINVAL;
  }
  return 0;
}
