#include "doctest.h"

#include "hns/analysis.hpp"
#include "hns/errors.hpp"
#include "hns/reduced_ode.hpp"

#include <cmath>
#include <sstream>
#include <string>

using namespace hns;

namespace {

// c = 0 closed form with U_theta(0) = 2 / lambda
double closed_form(double lambda, double y) { return 2.0 * (1 - y * y) / (lambda + y); }

} // namespace

TEST_CASE("bar_c3 and J") {
  CHECK(bar_c3(0, 0) == doctest::Approx(-4.0));
  CHECK(bar_c3(-1, -1) == 0.0);
  CHECK(bar_c3(3, 0) == doctest::Approx(-7.5));
  CHECK_THROWS_AS(bar_c3(-1.5, 0), InvalidArgument);
  CHECK(in_J(0, 0, -4));
  CHECK_FALSE(in_J(0, 0, -4.01));
  CHECK_FALSE(in_J(-2, 0, 0));
}

TEST_CASE("constants in both parameterizations agree") {
  const ReducedConstants k = ReducedConstants::from_c(0.3, -0.2, 1.7);
  for (double y : {-0.8, 0.0, 0.4})
    CHECK(k.rhs(y) == doctest::Approx(0.3 * (1 - y) - 0.2 * (1 + y) + 1.7 * (1 - y * y)));
}

TEST_CASE("c = 0 trajectories follow the closed form") {
  for (double lambda : {1.0, 2.0, 5.0, -2.0}) {
    const Trajectory t = integrate_noswirl(0, 0, 0, 2.0 / lambda, -0.9, 0.9);
    CAPTURE(lambda);
    double worst = 0.0;
    for (int i = 0; i <= 180; ++i) {
      const double y = -0.9 + 0.01 * i;
      worst = std::max(worst, std::abs(t.state(y).U_theta - closed_form(lambda, y)));
    }
    CHECK(worst < 1e-8);
    CHECK(t.max_invariant_defect() < 1e-7);
    CHECK_FALSE(t.blew_up());
  }
  CHECK(integrate_noswirl(0, 0, 0, 1.0, -0.9, 0.9).state(0.5).U_theta == doctest::Approx(0.6).epsilon(1e-10));
  CHECK(integrate_noswirl(0, 0, 0, 2.0, -0.9, 0.9).state(0.5).U_theta == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(integrate_noswirl(0, 0, 0, 0.0, -0.9, 0.9).state(0.7).U_theta == 0.0);
}

TEST_CASE("c3 = -4 global solution is U = -4y") {
  const Trajectory t = integrate_noswirl(0, 0, -4, 0.0, -0.99, 0.99);
  CHECK(t.state(0.5).U_theta == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(t.state(-0.99).U_theta == doctest::Approx(3.96).epsilon(1e-8));
}

TEST_CASE("constant swirl and zero U_theta stay constant") {
  ReducedState init;
  init.U_phi = 0.8;
  const Trajectory t = integrate_reduced(init, {}, -0.9, 0.9);
  const ReducedState s = t.state(0.6);
  CHECK(s.U_theta == 0.0);
  CHECK(s.U_phi == 0.8);
  CHECK(s.U_phi_prime == 0.0);
  CHECK(s.T == 0.0);
  CHECK_FALSE(t.no_swirl());
}

TEST_CASE("swirling trajectory keeps the invariant and monotone swirl") {
  ReducedState init;
  init.y = 0.1;
  init.U_theta = 0.5;
  init.U_phi = 0.3;
  init.U_phi_prime = 0.2;
  const ReducedConstants k = ReducedConstants::from_c(0.1, 0.2, 0.3, 0.1);
  const Trajectory t = integrate_reduced(init, k, -0.95, 0.95);
  CHECK(t.max_invariant_defect() < 1e-7);
  CHECK(t.swirl_monotone());
  // the swirl integral stays consistent with its kernel form
  CHECK(pressure_integral_check(profile_of(t), k) < 1e-6);
}

TEST_CASE("blow-up is reported with its location") {
  // lambda = 2/3 puts a pole at y = -2/3
  const Trajectory t = integrate_noswirl(0, 0, 0, 3.0, -0.99, 0.99);
  REQUIRE(t.escape_lo().has_value());
  CHECK(*t.escape_lo() == doctest::Approx(-2.0 / 3.0).epsilon(1e-4));
  CHECK_FALSE(t.escape_hi().has_value());
  CHECK_THROWS_AS(integrate_noswirl(0, 0, 0, 1.0, -1.0, 0.5), InvalidArgument);
  CHECK_THROWS_AS(integrate_noswirl(0, 0, 0, 1.0, 0.2, 0.5), InvalidArgument);
}

TEST_CASE("endpoint limits") {
  // U = 2 (1 - y^2) / (2 + y) tends to 0 at both ends; U = 2(1 - y) tends to 4 at y = -1
  const Trajectory a = integrate_noswirl(0, 0, 0, 1.0, -1 + 1e-6, 1 - 1e-6);
  const EndpointLimits la = endpoint_limits(a);
  CHECK(la.converged);
  CHECK(std::abs(la.at_minus) < 1e-6);
  CHECK(std::abs(la.at_plus) < 1e-6);
  const EndpointLimits lb = endpoint_limits(integrate_noswirl(0, 0, 0, 2.0, -1 + 1e-6, 1 - 1e-6));
  CHECK(lb.at_minus == doctest::Approx(4.0).epsilon(1e-6));
}

TEST_CASE("admissible interval of U_theta(0)") {
  const RegionProbe r = estimate_gamma_bounds(0, 0, 0);
  CHECK(std::abs(r.gamma_minus_hat + 2.0) < 0.05);
  CHECK(std::abs(r.gamma_plus_hat - 2.0) < 0.05);
  CHECK(r.bracket_width <= 1e-3);

  const RegionProbe d = estimate_gamma_bounds(0, 0, -4);
  CHECK(std::abs(d.gamma_minus_hat) < 0.05);
  CHECK(std::abs(d.gamma_plus_hat) < 0.05);

  CHECK_THROWS_AS(estimate_gamma_bounds(0, 0, -5), InvalidArgument);

  // a finer bracket stays inside the coarser one
  const RegionProbe fine = estimate_gamma_bounds(0, 0, 0, 1e-4);
  CHECK(std::abs(fine.gamma_plus_hat - r.gamma_plus_hat) <= r.bracket_width);
  CHECK(std::abs(fine.gamma_minus_hat - r.gamma_minus_hat) <= r.bracket_width);
}

TEST_CASE("reconstructed field for c3 = -4 is the special global solution") {
  const Trajectory t = integrate_noswirl(0, 0, -4, 0.0, -1 + 1e-6, 1 - 1e-6);
  const NoSwirlField f = reconstruct_noswirl_field(t, -4.0);
  const SolutionSpec special = special_global_c3m4();
  for (double theta : {0.05, 0.4, 1.0, 1.5707963, 2.2, 3.0}) {
    const FieldSample a = f.field(theta, 0.3), b = evaluate(special, theta, 0.3);
    CAPTURE(theta);
    CHECK(std::abs(a.u_r - b.u_r) < 1e-8);
    CHECK(std::abs(a.u_theta - b.u_theta) < 1e-8);
    CHECK(std::abs(a.p - b.p) < 1e-8);
    // u_theta = -4 cot(theta) independently of the catalog
    CHECK(a.u_theta == doctest::Approx(-4.0 / std::tan(theta)).epsilon(1e-9));
  }
}

TEST_CASE("reconstructed fields solve Navier-Stokes") {
  const Trajectory t = integrate_noswirl(0.5, 0.2, 1.0, 0.4, -1 + 1e-6, 1 - 1e-6);
  REQUIRE_FALSE(t.blew_up());
  const NoSwirlField f = reconstruct_noswirl_field(t, 1.0);
  GridSpec g;
  g.n_theta = 12;
  g.n_phi = 3;
  const ResidualReport r = ns_residual(FieldSource{f.field, f.domain}, g);
  CHECK(r.max_momentum < 1e-5);
  CHECK(r.max_divergence < 1e-6);

  const NoSwirlField z = reconstruct_noswirl_field(integrate_noswirl(0, 0, 0, 0, -0.9, 0.9), 0.7);
  const FieldSample s = z.field(1.0, 0.0);
  CHECK(s.u_r == 0.0);
  CHECK(s.u_theta == 0.0);
  CHECK(s.p == 0.7);

  ReducedState init;
  init.U_phi = 1.0;
  CHECK_THROWS_AS(reconstruct_noswirl_field(integrate_reduced(init, {}, -0.5, 0.5), 0.0), InvalidArgument);
}

TEST_CASE("integral form of the first equation") {
  const ReducedConstants k0 = ReducedConstants::from_c(0.2, 0.1, 0.5);
  const Trajectory t = integrate_noswirl(0.2, 0.1, 0.5, 0.3, -0.95, 0.95);
  CHECK(pressure_integral_check(profile_of(t), k0) < 1e-7);

  ReducedState init;
  init.U_phi = 1.3;
  const Trajectory c = integrate_reduced(init, {}, -0.9, 0.9);
  CHECK(pressure_integral_check(profile_of(c), {}) < 1e-6);

  // U_phi = y on the c = 0 background is not a solution
  ReducedProfile bad = profile_of(integrate_noswirl(0, 0, 0, 1.0, -0.9, 0.9));
  bad.U_phi = [](double y) { return y; };
  CHECK(pressure_integral_check(bad, ReducedConstants::from_c(0, 0, 0)) > 1e-2);
}

TEST_CASE("trajectory CSV") {
  std::ostringstream os;
  write_trajectory_csv(integrate_noswirl(0, 0, 0, 1.0, -0.5, 0.5), os, 5);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "y,U_theta,U_phi,U_phi_prime");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 5);
  CHECK(os.str().find("\n-5.0000000000000000e-01,") != std::string::npos);
}
