#include <cmath>
#include <vector>

#include "doctest.h"
#include "semigroup.hpp"
#include "spectral.hpp"

using namespace hmflow;

TEST_CASE("eigenfunctions evolve by pure exponential factors") {
  const SpectralConstants c = compute_constants(8);
  const auto basis = EigenfunctionBasis::build(c, 4);
  const ModeCoefficients a = decompose([&](double y) { return basis.eval(2, y); }, basis);
  for (int n = 0; n <= 4; ++n)
    CHECK(a.a[n] == doctest::Approx(n == 2 ? 1.0 : 0.0).epsilon(1e-9));
  const ModeCoefficients b = evolve(a, 1.7);
  CHECK(b.s == doctest::Approx(1.7));
  CHECK(b.a[2] == doctest::Approx(std::exp(-eigenvalue(c, 2) * 1.7)).epsilon(1e-12));
}

TEST_CASE("semigroup composition law") {
  const SpectralConstants c = compute_constants(9);
  const auto basis = EigenfunctionBasis::build(c, 6);
  const ModeCoefficients a =
      decompose([](double y) { return std::exp(-0.4 * (y - 1.5) * (y - 1.5)); }, basis);
  const ModeCoefficients one = evolve(evolve(a, 0.8), 0.6);
  const ModeCoefficients two = evolve(a, 1.4);
  for (std::size_t n = 0; n < a.a.size(); ++n)
    CHECK(one.a[n] == doctest::Approx(two.a[n]).epsilon(1e-12));
}

TEST_CASE("the unstable n=0 coefficient grows and is not clipped") {
  const SpectralConstants c = compute_constants(8);
  const auto basis = EigenfunctionBasis::build(c, 2);
  ModeCoefficients a;
  a.basis = &basis;
  a.a = {1.0, 0.0, 0.0};
  const ModeCoefficients b = evolve(a, 2.0);
  CHECK(b.a[0] == doctest::Approx(std::exp(c.gamma)).epsilon(1e-12));
}

TEST_CASE("reconstruction matches the expansion pointwise") {
  const SpectralConstants c = compute_constants(8);
  const auto basis = EigenfunctionBasis::build(c, 3);
  ModeCoefficients a;
  a.basis = &basis;
  a.a = {0.3, -0.1, 0.0, 0.05};
  for (double y : {0.3, 1.0, 2.5}) {
    const double expect =
        0.3 * basis.eval(0, y) - 0.1 * basis.eval(1, y) + 0.05 * basis.eval(3, y);
    CHECK(reconstruct(a, y) == doctest::Approx(expect).epsilon(1e-13));
  }
}

namespace {

// Brute-force Muckenhoupt maximal value: scan a dense family of intervals
// containing y, averaging with midpoint panels.
double brute_maximal(const Fn& psi, const SpectralConstants& c, double y) {
  auto avg = [&](double lo, double hi) {
    const int n = 4000;
    double num = 0.0, den = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = lo + (hi - lo) * (i + 0.5) / n;
      const double w = std::pow(x, 1.0 + c.omega) * std::exp(-0.25 * x * x);
      num += std::abs(psi(x)) * std::pow(x, c.gamma) * w;
      den += w;
    }
    return num / den;
  };
  double best = 0.0;
  for (int i = 0; i <= 60; ++i) {
    const double lo = y * std::pow(1e-3 / y, double(i) / 60.0);
    for (int j = 0; j <= 60; ++j) {
      const double hi = y * std::pow(30.0 / y, double(j) / 60.0);
      if (hi <= lo) continue;
      best = std::max(best, avg(lo, hi));
    }
  }
  return best;
}

}  // namespace

TEST_CASE("maximal function agrees with a brute-force scan") {
  const SpectralConstants c = compute_constants(8);
  Fn psi = [](double y) { return std::exp(-y); };
  for (double y : {0.5, 2.0}) {
    const double fast = maximal_function(psi, c, y);
    const double slow = brute_maximal(psi, c, y);
    CHECK(fast == doctest::Approx(slow).epsilon(2e-2));
    CHECK(fast >= slow * (1.0 - 2e-2));  // a sup cannot be beaten by a scan
  }
}

TEST_CASE("monotone hint and generic search agree when both apply") {
  const SpectralConstants c = compute_constants(8);
  // |psi| y^gamma = e^{-y} y^gamma is unimodal; use a genuinely decreasing one
  Fn psi = [&](double y) { return std::pow(y, -c.gamma) / (1.0 + y); };
  for (double y : {0.8, 3.0}) {
    const double generic = maximal_function(psi, c, y);
    const double hinted = maximal_function(psi, c, y, Monotonicity::nonincreasing);
    CHECK(hinted == doctest::Approx(generic).epsilon(1e-2));
  }
}

TEST_CASE("pointwise semigroup bound ratio is finite and grid-stable") {
  const SpectralConstants c = compute_constants(8);
  const auto basis = EigenfunctionBasis::build(c, 6);
  const ModeCoefficients a =
      decompose([](double y) { return y * y * std::exp(-0.5 * y * y); }, basis);
  const std::vector<double> s_vals = {0.5, 1.0, 2.0};
  std::vector<double> y_coarse, y_fine;
  for (double y = 0.5; y <= 6.0; y += 0.5) y_coarse.push_back(y);
  for (double y = 0.5; y <= 6.0; y += 0.25) y_fine.push_back(y);
  const double rc = check_pointwise_bound(a, s_vals, y_coarse);
  const double rf = check_pointwise_bound(a, s_vals, y_fine);
  CHECK(std::isfinite(rc));
  CHECK(rc > 0.0);
  // refining the sample grid must not blow the ratio up
  CHECK(rf <= rc * 1.5 + 1e-12);
}
