#include "doctest.h"

#include "hns/errors.hpp"
#include "hns/families.hpp"

#include <cmath>
#include <memory>
#include <random>

using namespace hns;
using namespace hns::family;

namespace {

constexpr double kHalfPi = kPi / 2;

// Left side of the reduced no-swirl equation, with U = u_theta sin(theta)
// and U' = u_r. Constant c1 (1 - y) + c2 (1 + y) + c3 (1 - y^2) for any
// axisymmetric no-swirl solution.
double reduced_lhs(const SolutionSpec &s, double theta) {
  const FieldSample f = evaluate(s, theta, 0.0);
  const double y = std::cos(theta), U = f.u_theta * std::sin(theta);
  return (1 - y * y) * f.u_r + 2 * y * U + 0.5 * U * U;
}

// Fits c1, c2, c3 from three angles and returns the worst mismatch at the others.
double reduced_defect(const SolutionSpec &s, double lo, double hi) {
  const double t1 = lo + 0.1 * (hi - lo), t2 = 0.5 * (lo + hi), t3 = hi - 0.1 * (hi - lo);
  double A[3][4];
  const double ts[3] = {t1, t2, t3};
  for (int i = 0; i < 3; ++i) {
    const double y = std::cos(ts[i]);
    A[i][0] = 1 - y;
    A[i][1] = 1 + y;
    A[i][2] = 1 - y * y;
    A[i][3] = reduced_lhs(s, ts[i]);
  }
  // Gaussian elimination without pivoting is fine for these well-separated rows.
  for (int k = 0; k < 3; ++k)
    for (int i = k + 1; i < 3; ++i) {
      const double m = A[i][k] / A[k][k];
      for (int j = k; j < 4; ++j) A[i][j] -= m * A[k][j];
    }
  double c[3];
  for (int i = 2; i >= 0; --i) {
    double v = A[i][3];
    for (int j = i + 1; j < 3; ++j) v -= A[i][j] * c[j];
    c[i] = v / A[i][i];
  }
  double worst = 0;
  for (int k = 1; k < 40; ++k) {
    const double t = lo + (hi - lo) * k / 40.0, y = std::cos(t);
    const double rhs = c[0] * (1 - y) + c[1] * (1 + y) + c[2] * (1 - y * y);
    worst = std::max(worst, std::abs(reduced_lhs(s, t) - rhs) / (1 + std::abs(rhs)));
  }
  return worst;
}

} // namespace

TEST_CASE("catalog point values") {
  {
    const auto f = evaluate(SolutionSpec(NoSwirlOneSing{4, 1}), kHalfPi, 0);
    CHECK(f.u_theta == doctest::Approx(2.0));
    CHECK(f.u_r == doctest::Approx(-2.0));
  }
  CHECK(evaluate(SolutionSpec(Landau{0.5}), kHalfPi, 0).u_theta == doctest::Approx(2.0 / 3.0));
  {
    const auto f = evaluate(SolutionSpec(PowerLiouville{2, 1}), kHalfPi, 0.4);
    CHECK(std::abs(f.u_theta) < 1e-14);
    CHECK(f.u_r == doctest::Approx(6.0));
    CHECK(f.u_phi == 0.0);
  }
  {
    const auto f = evaluate(SolutionSpec(ExpPowerLiouville{2}), kHalfPi, kPi / 4);
    CHECK(f.u_theta == doctest::Approx(-4.0));
    CHECK(std::abs(f.u_phi) < 1e-14);
    CHECK(f.u_r == doctest::Approx(6.0));
  }
  {
    const auto f = evaluate(SolutionSpec(EulerNS{1, 1}), kHalfPi, 0);
    CHECK(f.u_theta == doctest::Approx(1.0));
    CHECK(f.u_r == doctest::Approx(1.0));
    CHECK(f.p == doctest::Approx(-1.0));
  }
  {
    const auto f = evaluate(SolutionSpec(LimitPole{1}), kHalfPi, 0);
    CHECK(f.u_theta == doctest::Approx(-2.0));
    CHECK(f.u_r == doctest::Approx(-2.0));
    CHECK(f.p == doctest::Approx(-4.0));
  }
  {
    const auto f = evaluate(special_global_c3m4(), 1.0, 0);
    CHECK(f.u_theta == doctest::Approx(-4.0 / std::tan(1.0)));
    CHECK(f.u_r == doctest::Approx(-4.0));
    CHECK(f.p == doctest::Approx(-8.0 / std::pow(std::sin(1.0), 2)));
  }
}

TEST_CASE("power Liouville with alpha = 1 and |a| = 1 is the zero field") {
  const SolutionSpec s(PowerLiouville{1, 1});
  for (double t = 0.05; t < kPi; t += 0.1) {
    const auto f = evaluate(s, t, 0.0);
    CHECK(std::abs(f.u_theta) < 1e-13);
    CHECK(std::abs(f.u_r) < 1e-13);
  }
}

TEST_CASE("power Liouville symmetry alpha -> -alpha, |a| -> 1/|a|") {
  for (double alpha : {0.5, 2.0, -3.0}) {
    const SolutionSpec a(PowerLiouville{alpha, 1.7}), b(PowerLiouville{-alpha, 1 / 1.7});
    for (double t = 0.1; t < kPi; t += 0.2) {
      const auto fa = evaluate(a, t, 0), fb = evaluate(b, t, 0);
      CHECK(std::abs(fa.u_theta - fb.u_theta) < 1e-12 * (1 + std::abs(fa.u_theta)));
      CHECK(std::abs(fa.u_r - fb.u_r) < 1e-12 * (1 + std::abs(fa.u_r)));
    }
  }
}

TEST_CASE("power Liouville alpha = 1 is a Landau jet") {
  // |a|^2 cot^2(theta/2) = (1 + y)/(1 - y) |a|^2 gives u_theta = 2 sin / (lambda + cos)
  // with lambda = (1 + |a|^2)/(|a|^2 - 1), i.e. sigma = 1 - |a|^{-2}.
  const double a = 1.8;
  const SolutionSpec p(PowerLiouville{1, a}), l(Landau{1 - 1 / (a * a)});
  for (double t = 0.1; t < kPi; t += 0.25) {
    CHECK(evaluate(p, t, 0).u_theta == doctest::Approx(evaluate(l, t, 0).u_theta).epsilon(1e-12));
    CHECK(evaluate(p, t, 0).u_r == doctest::Approx(evaluate(l, t, 0).u_r).epsilon(1e-12));
  }
  CHECK(is_landau(p));
  CHECK(is_landau(l));
  CHECK_FALSE(is_landau(SolutionSpec(PowerLiouville{2, 1})));
}

TEST_CASE("no-swirl profiles satisfy the reduced equation") {
  const SolutionSpec specs[] = {
      SolutionSpec(Landau{0.5}),           SolutionSpec(Landau{-2.0}),
      SolutionSpec(NoSwirlOneSing{-1, 0}), SolutionSpec(NoSwirlOneSing{0.5, 0.3}),
      SolutionSpec(NoSwirlOneSing{2, 0}),  SolutionSpec(NoSwirlOneSing{2, 0.5}),
      SolutionSpec(NoSwirlOneSing{4, 1}),  SolutionSpec(NoSwirlOneSing{1, 0.75}),
      SolutionSpec(TypeTwoLog{0.0}),       SolutionSpec(EllipticC3Half{1.0}),
      SolutionSpec(EllipticC3Half{0.0}),   SolutionSpec(EllipticC3Half{0, true}),
      SolutionSpec(PowerLiouville{2, 1}),  SolutionSpec(PowerLiouville{-3, 0.5}),
      SolutionSpec(LimitPole{-1}),         SolutionSpec(EulerNS{1, 1}),
      special_global_c3m4(),
  };
  for (const auto &s : specs) {
    CAPTURE(s.tag());
    const auto &d = domain_of(s);
    CHECK(reduced_defect(s, std::max(d.theta_min, 0.05), std::min(d.theta_max, kPi - 0.05)) < 1e-9);
  }
}

TEST_CASE("pressure matches the radial momentum balance") {
  const SolutionSpec specs[] = {
      SolutionSpec(Landau{0.5}),          SolutionSpec(NoSwirlOneSing{0.5, 0.3}),
      SolutionSpec(NoSwirlOneSing{2, 0}), SolutionSpec(NoSwirlOneSing{4, 1}),
      SolutionSpec(TypeTwoLog{0.3}),      SolutionSpec(EllipticC3Half{1.0}),
      SolutionSpec(EllipticC3Half{0, true}),
      SolutionSpec(PowerLiouville{2, 1}), SolutionSpec(ExpLiouville{1.3, 0.7, -0.4}),
      SolutionSpec(ExpPowerLiouville{2}), SolutionSpec(LimitPole{1}),
      SolutionSpec(EulerNS{1, 1}),        special_global_c3m4(),
  };
  for (const auto &s : specs) {
    CAPTURE(s.tag());
    const auto u = as_field(s);
    const auto &d = domain_of(s);
    const double lo = std::max(d.theta_min, 0.0) + 0.2, hi = std::min(d.theta_max, kPi) - 0.2;
    for (int k = 0; k <= 6; ++k) {
      const double t = lo + (hi - lo) * k / 6.0, ph = 0.3 + k;
      const double p = evaluate(s, t, ph).p;
      CHECK(pressure_from_velocity(u, t, ph, 2e-3) == doctest::Approx(p).epsilon(1e-7));
    }
  }
  const SolutionSpec e(EulerNoSwirl{1, 0, 1, 1});
  const double p = evaluate(e, 1.0, 0).p;
  CHECK(pressure_from_velocity(as_field(e), 1.0, 0, 2e-3, false) == doctest::Approx(p).epsilon(1e-8));
}

TEST_CASE("elliptic pressure equals u_r - u_theta^2/2 + c3") {
  const SolutionSpec s(EllipticC3Half{2.5});
  for (double t = 0.2; t < 3.0; t += 0.3) {
    const auto f = evaluate(s, t, 0);
    CHECK(f.p == doctest::Approx(f.u_r - 0.5 * f.u_theta * f.u_theta + 0.5).epsilon(1e-10));
  }
}

TEST_CASE("constant swirl augmentation") {
  auto base = std::make_shared<const SolutionSpec>(Landau{0.5});
  const SolutionSpec s(WithConstantSwirl{base, 1.5});
  const auto f = evaluate(s, 1.0, 0), g = evaluate(*base, 1.0, 0);
  CHECK(f.u_phi == doctest::Approx(1.5 / std::sin(1.0)));
  CHECK(f.u_theta == g.u_theta);
  CHECK(f.p == doctest::Approx(g.p - 1.125 / std::pow(std::sin(1.0), 2)));
  CHECK(domain_of(s).excluded_points.size() == 2);
  CHECK(pressure_from_velocity(as_field(s), 1.0, 0.0) == doctest::Approx(f.p).epsilon(1e-8));
  auto nonaxi = std::make_shared<const SolutionSpec>(ExpPowerLiouville{1});
  CHECK_THROWS_AS(SolutionSpec(WithConstantSwirl{nonaxi, 1.0}), InvalidArgument);
}

TEST_CASE("domains") {
  CHECK(domain_of(SolutionSpec(Landau{0.5})).smooth());
  const SolutionSpec one(NoSwirlOneSing{4, 1});
  const auto &d = domain_of(one);
  CHECK(d.excluded_points.size() == 1);
  CHECK(d.excluded_points[0] == kSouthPole);

  const SolutionSpec tl(TypeTwoLog{0.0});
  const double t0 = domain_of(tl).theta_min;
  CHECK(std::abs(std::cos(t0) + std::pow(std::sin(t0), 2) * std::log(1 / std::tan(t0 / 2))) < 1e-12);
  CHECK(t0 > 0.0);
  CHECK_THROWS_AS(evaluate(tl, 0.5 * t0, 0), DomainError);
  CHECK_NOTHROW(evaluate(tl, t0 + 0.01, 0));

  const SolutionSpec en(EllipticC3Half{-0.5});
  const auto &de = domain_of(en);
  CHECK(de.theta_max < kPi);
  CHECK(evaluate(en, 0.5 * de.theta_max, 0).u_r == evaluate(en, 0.5 * de.theta_max, 0).u_r);
  CHECK_THROWS_AS(evaluate(en, de.theta_max + 0.01, 0), DomainError);

  CHECK(domain_of(SolutionSpec(PowerLiouville{1, 2})).smooth());
  CHECK(domain_of(SolutionSpec(ExpPowerLiouville{1})).excluded_points.size() == 1);
  CHECK(domain_of(SolutionSpec(ExpPowerLiouville{3})).excluded_points.size() == 2);
  CHECK_THROWS_AS(evaluate(SolutionSpec(Landau{0.5}), 0.0, 0), DomainError);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(SolutionSpec(NoSwirlOneSing{1, 0.9}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(NoSwirlOneSing{4, 0.5}), InvalidArgument);
  CHECK_NOTHROW(SolutionSpec(NoSwirlOneSing{6, 1.5}));
  CHECK_THROWS_AS(SolutionSpec(Landau{1.0}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(PowerLiouville{0, 1}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(PowerLiouville{1, 0}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(ExpLiouville{1, 0, 0}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(ExpPowerLiouville{0}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(LimitPole{0}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(EulerNoSwirl{0, 0, -1, 1}), InvalidArgument);
  CHECK_THROWS_AS(SolutionSpec(EulerNoSwirl{1, 0, 1, 2}), InvalidArgument);
}

TEST_CASE("the one-singularity family reduces to Landau at tau = 0") {
  for (double sigma : {-1.0, 0.3, 0.8}) {
    const SolutionSpec a(NoSwirlOneSing{0, sigma}), b(Landau{sigma});
    for (double t = 0.1; t < kPi; t += 0.3) {
      CHECK(evaluate(a, t, 0).u_theta == doctest::Approx(evaluate(b, t, 0).u_theta).epsilon(1e-12));
      CHECK(evaluate(a, t, 0).p == doctest::Approx(evaluate(b, t, 0).p).epsilon(1e-11));
    }
    CHECK(is_landau(a));
  }
}

TEST_CASE("sin(theta) u_theta tends to tau at the south pole") {
  for (auto [tau, sigma] : {std::pair{-1.0, 0.0}, {0.5, 0.3}, {2.0, 0.0}, {4.0, 1.0}}) {
    const SolutionSpec s(NoSwirlOneSing{tau, sigma});
    const double t = kPi - 1e-7;
    const double lim = std::sin(t) * evaluate(s, t, 0).u_theta;
    CHECK(lim == doctest::Approx(tau).epsilon(tau == 2.0 ? 0.2 : 1e-5));
  }
}
