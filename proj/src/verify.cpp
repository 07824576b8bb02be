#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "asymptotics.hpp"
#include "errors.hpp"
#include "fitting.hpp"
#include "semigroup.hpp"
#include "solver.hpp"
#include "spectral.hpp"
#include "stationary.hpp"

namespace hmflow {

namespace {

void run_check(std::vector<CheckResult>& out, const std::string& name,
               const std::function<std::string()>& body) {
  CheckResult r;
  r.name = name;
  try {
    r.detail = body();  // empty string means pass
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = e.what();
  }
  out.push_back(r);
}

std::string check_tol(double value, double tol, const char* what) {
  if (std::abs(value) <= tol) return {};
  std::ostringstream os;
  os << what << " = " << value << " exceeds " << tol;
  return os.str();
}

}  // namespace

std::vector<CheckResult> run_verification(bool full) {
  std::vector<CheckResult> out;

  run_check(out, "spectral.gamma_root", [] {
    for (int d = 7; d <= 12; ++d) {
      const SpectralConstants c = compute_constants(d);
      const double res = c.gamma * c.gamma - (d - 2) * c.gamma + (d - 1);
      if (std::abs(res) > 1e-12) return std::string("characteristic residual too large");
    }
    return std::string();
  });

  run_check(out, "spectral.d7_exact", [] {
    const SpectralConstants c = compute_constants(7);
    if (c.gamma != 2.0 || c.omega != 1.0) return std::string("d=7 constants not exact");
    return check_tol(eigenvalue(c, 1), 1e-15, "lambda_1(7)");
  });

  run_check(out, "spectral.orthonormality", [] {
    const SpectralConstants c = compute_constants(8);
    const auto basis = EigenfunctionBasis::build(c, 4);
    for (int m = 0; m <= 4; ++m)
      for (int n = m; n <= 4; ++n) {
        const double ip = inner_product([&](double y) { return basis.eval(m, y); },
                                        [&](double y) { return basis.eval(n, y); }, c);
        if (std::abs(ip - (m == n ? 1.0 : 0.0)) > 1e-8)
          return std::string("inner product off at (" + std::to_string(m) + "," +
                             std::to_string(n) + ")");
      }
    return std::string();
  });

  run_check(out, "spectral.hardy", [] {
    const SpectralConstants c = compute_constants(9);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> center(0.5, 6.0), width(0.2, 1.5);
    for (int k = 0; k < 10; ++k) {
      const double y0 = center(rng), w = width(rng);
      Fn bump = [y0, w](double y) {
        const double z = (y - y0) / w;
        return std::exp(-z * z);
      };
      for (double alpha : {c.gamma, 0.5 * (c.d - 2)}) {
        if (hardy_margin(bump, c, alpha) < -1e-10)
          return std::string("Hardy margin negative");
      }
    }
    return std::string();
  });

  run_check(out, "semigroup.composition", [] {
    const SpectralConstants c = compute_constants(8);
    const auto basis = EigenfunctionBasis::build(c, 6);
    Fn f = [](double y) { return std::exp(-0.3 * (y - 2.0) * (y - 2.0)); };
    const ModeCoefficients a = decompose(f, basis, 0.0);
    const ModeCoefficients one = evolve(evolve(a, 0.7), 0.5);
    const ModeCoefficients two = evolve(a, 1.2);
    for (std::size_t n = 0; n < a.a.size(); ++n)
      if (std::abs(one.a[n] - two.a[n]) > 1e-12 * (1.0 + std::abs(two.a[n])))
        return std::string("semigroup composition violated");
    return std::string();
  });

  run_check(out, "fit.round_trip", [] {
    std::vector<double> t, g;
    for (int i = 0; i < 400; ++i) {
      const double ti = 0.3 * (1.0 - std::pow(10.0, -4.0 * i / 399.0));
      t.push_back(ti);
      g.push_back(5.0 * std::pow(0.3 - ti, -0.63));
    }
    const BlowupFit fit = detect_blowup_and_fit(t, g);
    if (std::abs(fit.T - 0.3) > 1e-6 || std::abs(fit.p - 0.63) > 1e-6 ||
        std::abs(fit.C - 5.0) > 1e-5)
      return std::string("synthetic power law not recovered");
    if (fit.classification != BlowupFit::Class::TypeII) return std::string("misclassified");
    return std::string();
  });

  run_check(out, "asymptotics.exponent", [] {
    const RatePrediction p = predict_exponent(8, 1);
    return check_tol(p.exponent - (3.0 + std::sqrt(2.0)) / 7.0, 1e-14, "p(8,1) error");
  });

  run_check(out, "solver.nonlinearity", [] {
    if (std::abs(nonlinearity_g(0.0) - 1.0 / 6.0) > 1e-15) return std::string("g(0) wrong");
    if (std::abs(nonlinearity_g(M_PI) - 1.0 / (M_PI * M_PI)) > 1e-14)
      return std::string("g(pi) wrong");
    for (double x : {1e-3, 0.009, 0.011, 0.5, 3.0})
      if (std::abs(nonlinearity_g(x) - nonlinearity_g(-x)) > 1e-16)
        return std::string("g not even");
    return std::string();
  });

  if (!full) return out;

  run_check(out, "stationary.scaling", [] {
    const SpectralConstants c = compute_constants(8);
    const StationaryProfile u1 = solve_stationary(c, 1.0, 100.0);
    const StationaryProfile u2 = solve_stationary(c, 2.0, 50.0);
    for (double xi : {0.1, 0.5, 1.0, 5.0, 20.0})
      if (std::abs(u2.eval(xi) - u1.eval(2.0 * xi)) > 1e-6)
        return std::string("scaling identity violated");
    return std::string();
  });

  run_check(out, "stationary.q_cross_check", [] {
    const SpectralConstants c = compute_constants(8);
    ShootOptions so;
    so.points_per_decade = 512;
    StationaryProfile u1 = solve_stationary(c, 1.0, 200.0, so);
    const RatePrediction pred = predict_exponent(8, 1);
    const QProfile qi = solve_q_profile(u1, 0.0, pred.omega_l);
    const QProfile qd = solve_q_profile_ivp(c, 1.0, 0.0, pred.omega_l, 200.0, so);
    auto at = [](const QProfile& q, double xi) {
      auto it = std::lower_bound(q.xi.begin(), q.xi.end(), xi);
      const std::size_t i = std::min<std::size_t>(it - q.xi.begin(), q.xi.size() - 1);
      return q.q[i];
    };
    for (double xi : {0.5, 2.0, 10.0, 50.0}) {
      const double a = at(qi, xi), b = at(qd, xi);
      if (std::abs(a - b) > 1e-5 * std::abs(b)) return std::string("q-profile routes disagree");
    }
    return std::string();
  });

  run_check(out, "solver.zero_fixed_point", [] {
    SimParams p;
    p.constants = compute_constants(8);
    p.r_max = 10.0;
    p.t_max = 0.01;
    SimState s = initial_state([](double) { return 0.0; }, p);
    for (int i = 0; i < 50; ++i) s = step_fixed(s, p, 1e-4);
    for (double v : s.phi)
      if (v != 0.0) return std::string("zero state drifted");
    return std::string();
  });

  run_check(out, "solver.comparison", [] {
    SimParams p;
    p.constants = compute_constants(8);
    p.r_max = 20.0;
    p.allow_remesh = false;
    SimState a = initial_state([](double r) { return 0.3 * r * std::exp(-r * r); }, p);
    SimState b = a;
    for (std::size_t i = 0; i < b.phi.size(); ++i)
      b.phi[i] += 0.05 * std::exp(-b.r[i] * b.r[i]);
    for (int it = 0; it < 200; ++it) {
      const double dt = std::min(stable_dt(a, p), stable_dt(b, p));
      a = step_fixed(a, p, dt);
      b = step_fixed(b, p, dt);
      for (std::size_t i = 0; i < a.phi.size(); ++i)
        if (a.phi[i] > b.phi[i] + 1e-8) return std::string("ordering violated");
    }
    return std::string();
  });

  return out;
}

}  // namespace hmflow
