#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "errors.hpp"
#include "spectral.hpp"

using namespace hmflow;

namespace {

// Independent brute-force integral of f against rho = y^{d-1} e^{-y^2/4},
// log-spaced trapezoid. Slow but free of the production quadrature path.
double brute_weighted(const std::function<double(double)>& f, int d) {
  const int n = 400000;
  const double lo = std::log(1e-7), hi = std::log(45.0);
  double acc = 0.0, prev = 0.0;
  double yprev = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double y = std::exp(lo + (hi - lo) * i / n);
    const double v = f(y) * std::pow(y, d - 1) * std::exp(-0.25 * y * y);
    if (i > 0) acc += 0.5 * (v + prev) * (y - yprev);
    prev = v;
    yprev = y;
  }
  return acc;
}

}  // namespace

TEST_CASE("characteristic root and special d=7 values") {
  for (int d = 7; d <= 12; ++d) {
    const SpectralConstants c = compute_constants(d);
    CHECK(std::abs(c.gamma * c.gamma - (d - 2) * c.gamma + (d - 1)) < 1e-12);
    CHECK(c.gamma < 0.5 * (d - 2));  // smaller root
    CHECK(std::abs(c.omega - std::sqrt(double(d) * d - 8.0 * d + 8.0)) < 1e-12);
  }
  const SpectralConstants c7 = compute_constants(7);
  CHECK(c7.gamma == 2.0);
  CHECK(c7.omega == 1.0);
  CHECK(eigenvalue(c7, 1) == 0.0);
}

TEST_CASE("d=8 constants against closed forms") {
  const SpectralConstants c = compute_constants(8);
  CHECK(c.gamma == doctest::Approx(3.0 - std::sqrt(2.0)).epsilon(1e-15));
  CHECK(c.omega == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eigenvalue(c, 1) == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-15));
  CHECK(eigenvalue(c, 0) == doctest::Approx(-0.5 * c.gamma).epsilon(1e-15));
}

TEST_CASE("dimension below the supercritical range is rejected") {
  for (int d : {-1, 0, 2, 6}) {
    try {
      compute_constants(d);
      FAIL("expected an error for d=" << d);
    } catch (const Error& e) {
      CHECK(e.code() == errc::dimension_too_small);
    }
  }
}

TEST_CASE("weight normalization <1,1> = 2^{d-1} Gamma(d/2)") {
  for (int d : {7, 8, 9}) {
    const SpectralConstants c = compute_constants(d);
    const double expect = std::pow(2.0, d - 1) * std::tgamma(0.5 * d);
    CHECK(weighted_integral([](double) { return 1.0; }, c) ==
          doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("eigenbasis is orthonormal (against an independent integrator)") {
  const SpectralConstants c = compute_constants(8);
  const auto basis = EigenfunctionBasis::build(c, 3);
  // production quadrature
  for (int m = 0; m <= 3; ++m)
    for (int n = m; n <= 3; ++n) {
      const double ip = inner_product([&](double y) { return basis.eval(m, y); },
                                      [&](double y) { return basis.eval(n, y); }, c);
      CHECK(std::abs(ip - (m == n ? 1.0 : 0.0)) < 1e-10);
    }
  // brute force, immune to any shared quadrature bug
  const double n00 = brute_weighted([&](double y) { return basis.eval(0, y) * basis.eval(0, y); }, 8);
  const double n01 = brute_weighted([&](double y) { return basis.eval(0, y) * basis.eval(1, y); }, 8);
  CHECK(n00 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(std::abs(n01) < 1e-5);
}

TEST_CASE("eigenfunction origin and infinity coefficients govern the asymptotics") {
  const SpectralConstants c = compute_constants(8);
  const auto basis = EigenfunctionBasis::build(c, 4);
  for (int n = 0; n <= 4; ++n) {
    const double y = 1e-5;
    CHECK(basis.eval(n, y) ==
          doctest::Approx(basis.origin_coeff(n) * std::pow(y, -c.gamma)).epsilon(1e-8));
    // far enough out that the subleading Laguerre term n(n+a)/(Y^2/4) is small
    const double Y = 150.0;
    CHECK(basis.eval(n, Y) ==
          doctest::Approx(basis.infinity_coeff(n) * std::pow(Y, -c.gamma + 2.0 * n))
              .epsilon(1e-2));
  }
}

TEST_CASE("eigen-equation residual is tiny") {
  std::vector<double> grid;
  for (double y = 0.25; y <= 12.0; y *= 1.3) grid.push_back(y);
  for (int d : {7, 8, 11}) {
    const SpectralConstants c = compute_constants(d);
    const auto basis = EigenfunctionBasis::build(c, 6);
    for (int n : {0, 2, 6}) {
      const RadialProfile Af = apply_operator(basis, n, grid);
      const double lam = eigenvalue(c, n);
      double worst = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        worst = std::max(worst, std::abs(Af.values[i] - lam * basis.eval(n, grid[i])));
        scale = std::max(scale, std::abs(basis.eval(n, grid[i])));
      }
      CHECK(worst / scale < 1e-8);
    }
  }
}

TEST_CASE("generalized Laguerre closed forms") {
  const double a = 1.3;
  CHECK(laguerre(0, a, 0.7) == 1.0);
  CHECK(laguerre(1, a, 0.7) == doctest::Approx(1.0 + a - 0.7).epsilon(1e-15));
  for (double x : {0.0, 0.4, 3.0}) {
    const double expect = 0.5 * x * x - (a + 2.0) * x + 0.5 * (a + 1.0) * (a + 2.0);
    CHECK(laguerre(2, a, x) == doctest::Approx(expect).epsilon(1e-14));
  }
  // value at zero: binomial(n+a, n)
  for (int n : {3, 5, 9}) {
    const double expect =
        std::exp(std::lgamma(n + a + 1.0) - std::lgamma(n + 1.0) - std::lgamma(a + 1.0));
    CHECK(laguerre(n, a, 0.0) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("projection recovers mode combinations") {
  const SpectralConstants c = compute_constants(9);
  const auto basis = EigenfunctionBasis::build(c, 5);
  auto f = [&](double y) {
    return 0.8 * basis.eval(0, y) - 0.25 * basis.eval(2, y) + 0.01 * basis.eval(5, y);
  };
  const std::vector<double> a = project(f, basis, 5);
  const std::vector<double> expect = {0.8, 0.0, -0.25, 0.0, 0.0, 0.01};
  REQUIRE(a.size() == 6);
  for (int n = 0; n <= 5; ++n) CHECK(a[n] == doctest::Approx(expect[n]).epsilon(1e-9));
}

TEST_CASE("hardy margin is nonnegative for random bumps") {
  const SpectralConstants c = compute_constants(9);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> center(0.5, 6.0), width(0.2, 1.5);
  for (int k = 0; k < 10; ++k) {
    const double y0 = center(rng), w = width(rng);
    Fn bump = [y0, w](double y) {
      const double z = (y - y0) / w;
      return std::exp(-z * z);
    };
    for (double alpha : {c.gamma, 0.5 * (c.d - 2)})
      CHECK(hardy_margin(bump, c, alpha) >= -1e-10);
  }
}

TEST_CASE("interpolant reproduces samples and stays monotone") {
  RadialProfile p;
  p.variable = RadialProfile::Var::y;
  p.grid = {0.1, 0.5, 1.0, 2.0, 5.0};
  p.values = {0.0, 0.2, 0.6, 0.9, 1.0};
  const Fn f = interpolant(p);
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    CHECK(f(p.grid[i]) == doctest::Approx(p.values[i]).epsilon(1e-14));
  double prev = -1.0;
  for (double y = 0.1; y <= 5.0; y += 0.01) {
    const double v = f(y);
    CHECK(v >= prev - 1e-14);
    CHECK(v <= 1.0 + 1e-14);
    prev = v;
  }
}

TEST_CASE("invalid basis index is reported") {
  const auto basis = EigenfunctionBasis::build(compute_constants(8), 3);
  try {
    (void)basis.normalization(4);
    FAIL("expected an index error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::index_out_of_range);
  }
}
