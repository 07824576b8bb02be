#include <cmath>

#include "doctest.h"
#include "errors.hpp"
#include "solver.hpp"

using namespace hmflow;

TEST_CASE("nonlinearity g(x) = (x - sin x)/x^3 across the series handoff") {
  CHECK(nonlinearity_g(0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(nonlinearity_g(M_PI) == doctest::Approx(1.0 / (M_PI * M_PI)).epsilon(1e-14));
  for (double x : {1e-4, 9e-3, 1.1e-2, 0.5, 2.0}) {
    CHECK(nonlinearity_g(x) == doctest::Approx(nonlinearity_g(-x)).epsilon(1e-15));
    CHECK(nonlinearity_g(x) > 0.0);
    CHECK(nonlinearity_g(x) <= 1.0 / 6.0);
  }
  // series and direct formula agree at the switch point
  const double a = 0.99e-2, b = 1.01e-2;
  CHECK(nonlinearity_g(a) == doctest::Approx(nonlinearity_g(b)).epsilon(1e-6));
}

TEST_CASE("grid construction invariants") {
  SimParams p;
  p.constants = compute_constants(8);
  p.r_max = 40.0;
  const double g0 = 5.0;
  const auto r = build_grid(p, g0);
  REQUIRE(r.size() > 10);
  CHECK(r.front() == 0.0);
  CHECK(r.back() == 40.0);
  for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i] > r[i - 1]);
  int below = 0;
  for (double x : r)
    if (x > 0.0 && x < p.c_inner / g0) ++below;
  CHECK(below >= 2 * p.n_inner - 1);
  // spacing never grows faster than the declared ratio
  for (std::size_t i = 2; i + 1 < r.size(); ++i)
    CHECK((r[i + 1] - r[i]) / (r[i] - r[i - 1]) < p.grid_ratio + 1e-9);
}

TEST_CASE("zero state is an exact fixed point") {
  SimParams p;
  p.constants = compute_constants(8);
  p.r_max = 10.0;
  SimState s = initial_state([](double) { return 0.0; }, p);
  for (int i = 0; i < 40; ++i) s = step_fixed(s, p, 1e-4);
  for (double v : s.phi) CHECK(v == 0.0);
}

TEST_CASE("small data relaxes and the run reports no blow-up") {
  SimParams p;
  p.constants = compute_constants(8);
  p.r_max = 30.0;
  p.t_max = 2.0;
  const SimResult res = run_simulation(
      [](double r) { return 0.05 * r * std::exp(-r * r); }, p);
  CHECK(res.status == SimResult::Status::no_blowup);
  CHECK(res.final_state.origin_gradient() < 1e-3);
  CHECK(res.times.size() > 10);
}

TEST_CASE("comparison principle: ordered data stay ordered") {
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
    for (std::size_t i = 0; i < a.phi.size(); ++i) CHECK(a.phi[i] <= b.phi[i] + 1e-8);
  }
}

TEST_CASE("strip preservation: |u - pi/2| <= pi/2 is invariant") {
  SimParams p;
  p.constants = compute_constants(8);
  p.r_max = 20.0;
  p.allow_remesh = false;
  // the crest sits inside the strip with a margin wider than truncation
  // error; data touching u = pi exactly picks up O(h^2) kink overshoot
  SimState s = initial_state([](double r) { return 2.9 * std::min(1.0, r); }, p);
  for (int it = 0; it < 300; ++it) {
    s = step_fixed(s, p, stable_dt(s, p));
    for (std::size_t i = 0; i < s.r.size(); ++i) {
      const double u = s.r[i] * s.phi[i];
      if (s.r[i] > 0.0) CHECK(std::abs(u - M_PI_2) <= M_PI_2 + 1e-8);
    }
  }
}

TEST_CASE("nested remesh keeps existing nodes and values") {
  SimParams p;
  p.constants = compute_constants(8);
  p.r_max = 10.0;
  SimState s = initial_state([](double r) { return 0.5 * r * std::exp(-r * r); }, p);
  // pretend the gradient grew so the refiner has work to do
  SimState steep = s;
  for (double& v : steep.phi) v *= 4.0;
  const SimState fine = remesh(steep, p);
  CHECK(fine.refinement_level == steep.refinement_level + 1);
  CHECK(fine.r.size() > steep.r.size());
  std::size_t j = 0;
  for (std::size_t i = 0; i < steep.r.size(); ++i) {
    while (j < fine.r.size() && fine.r[j] != steep.r[i]) ++j;
    REQUIRE(j < fine.r.size());
    CHECK(fine.phi[j] == steep.phi[i]);
  }
}

TEST_CASE("steep data blows up and the gradient series is monotone at the tail") {
  SimParams p;
  p.constants = compute_constants(8);
  p.r_max = 20.0;
  p.t_max = 5.0;
  p.stop_threshold = 300.0;
  const SimResult res = run_simulation(
      [](double r) { return M_PI * std::min(1.0, r); }, p);
  CHECK(res.status == SimResult::Status::blowup);
  CHECK(res.grads.back() >= 300.0);
  CHECK(res.checkpoints.size() >= 3);
  // once focusing, the origin gradient increases
  const std::size_t n = res.grads.size();
  for (std::size_t i = n - 5; i + 1 < n; ++i) CHECK(res.grads[i + 1] > res.grads[i]);
}

TEST_CASE("parameter validation") {
  SimParams p;
  p.constants = compute_constants(8);
  p.reaction_dt_factor = 0.7;
  try {
    p.validate();
    FAIL("expected a stability-factor rejection");
  } catch (const Error& e) {
    CHECK(e.code() == errc::cfl_violation);
  }
  p.reaction_dt_factor = 0.2;
  p.grid_ratio = 2.5;
  CHECK_THROWS_AS(p.validate(), Error);
}

TEST_CASE("time step below the budget reports blow-up via its error code") {
  SimParams p;
  p.constants = compute_constants(8);
  p.r_max = 10.0;
  SimState s = initial_state([](double r) { return 0.3 * r * std::exp(-r * r); }, p);
  try {
    step_fixed(s, p, 1e-19);
    FAIL("expected step-size underflow");
  } catch (const Error& e) {
    CHECK(e.code() == errc::step_size_underflow);
  }
}
