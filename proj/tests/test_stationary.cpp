#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "stationary.hpp"

using namespace hmflow;

TEST_CASE("profile is monotone increasing and pinned below pi/2") {
  const SpectralConstants c = compute_constants(8);
  const StationaryProfile u = solve_stationary(c, 1.0, 300.0);
  REQUIRE(u.xi.size() == u.u.size());
  for (std::size_t i = 1; i < u.u.size(); ++i) CHECK(u.u[i] > u.u[i - 1]);
  for (double v : u.u) CHECK(v < M_PI_2);
  for (double v : u.du) CHECK(v > 0.0);
}

TEST_CASE("series start: cubic coefficient and small-xi behavior") {
  const SpectralConstants c = compute_constants(8);
  const StationaryProfile u = solve_stationary(c, 2.0, 50.0);
  // U = alpha xi + c3 xi^3 + ...; extract c3 numerically from eval
  const double xi = 1e-3;
  const double c3 = (u.eval(xi) - 2.0 * xi) / (xi * xi * xi);
  CHECK(c3 == doctest::Approx(u.series_c3()).epsilon(1e-4));
  CHECK(u.series_c3() < 0.0);  // profile bends below the linear ray
}

TEST_CASE("scaling identity U_alpha(xi) = U_1(alpha xi)") {
  const SpectralConstants c = compute_constants(8);
  const StationaryProfile u1 = solve_stationary(c, 1.0, 100.0);
  const StationaryProfile u2 = solve_stationary(c, 2.0, 50.0);
  for (double xi : {0.05, 0.3, 1.0, 4.0, 20.0})
    CHECK(u2.eval(xi) == doctest::Approx(u1.eval(2.0 * xi)).epsilon(1e-8));
}

TEST_CASE("tail plateau h(d) reference values") {
  // frozen from runs at xi_max = 1000 with fit residual < 2e-6
  const double h8 = 1.35700095879;
  const double h7 = 2.68794798776;
  SUBCASE("d=8") {
    StationaryProfile u = solve_stationary(compute_constants(8), 1.0, 1000.0);
    extract_h(u);
    CHECK(u.h_estimate == doctest::Approx(h8).epsilon(1e-7));
    CHECK(u.fit_residual < 1e-5);
  }
  SUBCASE("d=7") {
    StationaryProfile u = solve_stationary(compute_constants(7), 1.0, 1000.0);
    extract_h(u);
    CHECK(u.h_estimate == doctest::Approx(h7).epsilon(1e-7));
  }
  SUBCASE("alpha scaling of the plateau: h_alpha = h alpha^{-gamma}") {
    const SpectralConstants c = compute_constants(8);
    StationaryProfile u = solve_stationary(c, 3.0, 1000.0);
    extract_h(u);
    CHECK(u.h_estimate == doctest::Approx(h8 * std::pow(3.0, -c.gamma)).epsilon(1e-6));
  }
}

TEST_CASE("tail exponent of pi/2 - U is gamma") {
  const SpectralConstants c = compute_constants(9);
  StationaryProfile u = solve_stationary(c, 1.0, 1000.0);
  const double lo = 200.0, hi = 800.0;
  const double slope = std::log((M_PI_2 - u.eval(hi)) / (M_PI_2 - u.eval(lo))) / std::log(hi / lo);
  CHECK(slope == doctest::Approx(-c.gamma).epsilon(1e-3));
}

TEST_CASE("q-profile: positivity, tail slope, and IVP cross-check") {
  const SpectralConstants c = compute_constants(8);
  ShootOptions so;
  StationaryProfile u = solve_stationary(c, 1.0, 200.0, so);
  const double omega_l = (std::sqrt(2.0) - 1.0) / 2.0 / c.gamma;
  const QProfile qi = solve_q_profile(u, 0.0, omega_l);
  for (double v : qi.q) CHECK(v >= -1e-12);
  CHECK(qi.tail_slope() == doctest::Approx(2.0 - c.gamma).epsilon(0.05));

  const QProfile qd = solve_q_profile_ivp(c, 1.0, 0.0, omega_l, 200.0, so);
  auto at = [](const QProfile& q, double xi) {
    auto it = std::lower_bound(q.xi.begin(), q.xi.end(), xi);
    const std::size_t i = std::min<std::size_t>(it - q.xi.begin(), q.xi.size() - 1);
    return q.q[i];
  };
  for (double xi : {0.5, 2.0, 10.0, 50.0})
    CHECK(at(qi, xi) == doctest::Approx(at(qd, xi)).epsilon(1e-4));
}

TEST_CASE("eval is continuous across the series and tail handoffs") {
  const SpectralConstants c = compute_constants(8);
  StationaryProfile u = solve_stationary(c, 1.0, 400.0);
  extract_h(u);
  // straddle each handoff by a hair so the function's own variation is
  // negligible against the tolerance
  const double a = u.xi.front(), b = u.xi.back();
  CHECK(u.eval(a * (1 - 1e-9)) == doctest::Approx(u.eval(a * (1 + 1e-9))).epsilon(1e-7));
  CHECK(u.eval(b * (1 - 1e-9)) == doctest::Approx(u.eval(b * (1 + 1e-9))).epsilon(1e-7));
}

TEST_CASE("bad shooting inputs are rejected") {
  const SpectralConstants c = compute_constants(8);
  CHECK_THROWS_AS(solve_stationary(c, -1.0, 100.0), Error);
  CHECK_THROWS_AS(solve_stationary(c, 1.0, 0.0), Error);
}
