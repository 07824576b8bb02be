#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "hmflow.h"

TEST_CASE("spectrum values and error codes") {
  double gamma = 0.0, omega = 0.0;
  std::vector<double> lambda(4), norm(4), origin(4), infinity(4);
  REQUIRE(hmf_spectrum(8, 3, &gamma, &omega, lambda.data(), norm.data(), origin.data(),
                       infinity.data()) == HMF_OK);
  CHECK(gamma == doctest::Approx(3.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(omega == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(lambda[1] == doctest::Approx((std::sqrt(2.0) - 1.0) / 2.0).epsilon(1e-14));
  for (double v : norm) CHECK(v > 0.0);

  CHECK(hmf_spectrum(5, 3, &gamma, &omega, nullptr, nullptr, nullptr, nullptr) == HMF_EINVAL);
  CHECK(std::strlen(hmf_last_error()) > 0);
}

TEST_CASE("rate prediction and the out-of-scope code") {
  double p = 0.0;
  REQUIRE(hmf_predict(8, 1, nullptr, nullptr, nullptr, &p) == HMF_OK);
  CHECK(p == doctest::Approx((3.0 + std::sqrt(2.0)) / 7.0).epsilon(1e-13));
  CHECK(hmf_predict(7, 1, nullptr, nullptr, nullptr, &p) == HMF_ESCOPE);
}

TEST_CASE("stationary profile handle lifecycle") {
  hmf_stationary* h = nullptr;
  REQUIRE(hmf_stationary_solve(8, 1.0, 400.0, &h) == HMF_OK);
  REQUIRE(h != nullptr);
  const int n = hmf_stationary_size(h);
  CHECK(n > 100);
  std::vector<double> xi(n), u(n);
  CHECK(hmf_stationary_data(h, xi.data(), u.data(), nullptr) == HMF_OK);
  CHECK(u.back() < M_PI_2);
  double val = 0.0;
  CHECK(hmf_stationary_eval(h, 1.0, &val) == HMF_OK);
  CHECK(val > 0.0);
  double hest = 0.0, hcorr = 0.0, resid = 0.0;
  CHECK(hmf_stationary_tail(h, &hest, &hcorr, &resid) == HMF_OK);
  CHECK(hest == doctest::Approx(1.35700095879).epsilon(1e-5));
  hmf_stationary_free(h);

  CHECK(hmf_stationary_solve(8, -2.0, 400.0, &h) == HMF_EINVAL);
}

TEST_CASE("eigenfunction evaluation") {
  double v = 0.0;
  REQUIRE(hmf_eigenfunction_eval(8, 0, 2.0, &v) == HMF_OK);
  CHECK(v != 0.0);
  CHECK(hmf_eigenfunction_eval(8, -1, 2.0, &v) == HMF_EINVAL);
}

TEST_CASE("initial data and a short simulation round trip") {
  hmf_initial_data* id = nullptr;
  REQUIRE(hmf_initial_data_create(8, 1, 20.0, nullptr, 0, &id) == HMF_OK);
  double alpha = 0, inner = 0, outer = 0, hest = 0;
  CHECK(hmf_initial_data_info(id, &alpha, &inner, &outer, &hest) == HMF_OK);
  CHECK(inner < 1.0);
  CHECK(outer > 100.0);
  double psi = 0.0;
  CHECK(hmf_initial_data_eval(id, 1.0, &psi) == HMF_OK);
  CHECK(std::fabs(psi) <= M_PI_2);
  double eps = 0.0;
  CHECK(hmf_initial_data_epsilon(id, 20.0, &eps) == HMF_OK);
  CHECK(eps > 0.0);
  CHECK(eps < 1.0);
  double mis = 0.0;
  CHECK(hmf_initial_data_mismatch(id, 20.0, 0.0, &mis) == HMF_OK);
  CHECK(mis > 0.0);
  CHECK(mis < 0.2);
  hmf_initial_data_free(id);
}

TEST_CASE("simulation of decaying sampled data") {
  hmf_sim_params p;
  hmf_sim_params_defaults(&p);
  p.r_max = 20.0;
  p.t_max = 1.0;
  std::vector<double> r, u;
  for (double x = 0.0; x <= 20.0; x += 0.05) {
    r.push_back(x);
    u.push_back(0.05 * x * std::exp(-x * x));
  }
  hmf_sim* sim = nullptr;
  REQUIRE(hmf_simulate_samples(8, r.data(), u.data(), int(r.size()), &p, &sim) == HMF_OK);
  CHECK(hmf_sim_status(sim) == 0);
  CHECK(hmf_sim_steps(sim) > 100);
  const int n = hmf_sim_series_size(sim);
  REQUIRE(n > 2);
  std::vector<double> t(n), g(n);
  CHECK(hmf_sim_series(sim, t.data(), g.data()) == HMF_OK);
  CHECK(g.back() < g.front());
  hmf_sim_free(sim);
}

TEST_CASE("fit entry point") {
  std::vector<double> t, g;
  for (int i = 0; i < 300; ++i) {
    const double gi = std::pow(10.0, 4.0 * i / 299.0);
    t.push_back(0.4 - std::pow(gi / 2.0, -1.0 / 0.63));
    g.push_back(gi);
  }
  double T = 0, p = 0, C = 0, resid = 0;
  int cls = -1;
  REQUIRE(hmf_fit_series(t.data(), g.data(), int(t.size()), 0.6, &T, &p, &C, &resid, &cls) ==
          HMF_OK);
  CHECK(T == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(p == doctest::Approx(0.63).epsilon(1e-6));
  CHECK(cls == 1);
  // too few decades
  std::vector<double> t2(t.begin(), t.begin() + 40), g2(g.begin(), g.begin() + 40);
  CHECK(hmf_fit_series(t2.data(), g2.data(), 40, 0.6, &T, &p, &C, &resid, &cls) == HMF_ENUMERIC);
}

TEST_CASE("fast verification suite is green") {
  std::string buf(8192, '\0');
  const int rc = hmf_verify(0, buf.data(), buf.size());
  INFO(buf.c_str());
  CHECK(rc == HMF_OK);
}
