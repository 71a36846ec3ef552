#include "doctest.h"

#include "hns/errors.hpp"
#include "hns/geometry.hpp"

#include <cmath>
#include <random>

using namespace hns;

namespace {

// u = x / |x|^2: u_r = 1 on the unit sphere, div u = 1, and
// -Lap u + (u.grad)u = (2 - 1) e_r there (computed by hand).
FieldSample radial_source(double, double) { return {1.0, 0.0, 0.0, 0.0}; }

} // namespace

TEST_CASE("spherical coordinates round trip") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> th(0.05, kPi - 0.05), ph(0.0, 2 * kPi), rr(0.1, 10.0);
  for (int i = 0; i < 200; ++i) {
    const auto p = SphericalPoint::make(rr(rng), th(rng), ph(rng));
    const auto q = cartesian_to_spherical(spherical_to_cartesian(p));
    CHECK(q.r == doctest::Approx(p.r).epsilon(1e-14));
    CHECK(q.theta == doctest::Approx(p.theta).epsilon(1e-13));
    CHECK(q.phi == doctest::Approx(p.phi).epsilon(1e-13));
  }
  CHECK_THROWS_AS(SphericalPoint::make(1.0, 0.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(SphericalPoint::make(-1.0, 1.0, 0.0), InvalidArgument);
  CHECK(SphericalPoint::make(1.0, 1.0, -kPi / 2).phi == doctest::Approx(1.5 * kPi));
}

TEST_CASE("frame is orthonormal and right-handed") {
  const Frame f = basis_vectors(0.7, 2.1);
  CHECK(dot(f.e_r, f.e_theta) == doctest::Approx(0.0));
  CHECK(dot(f.e_r, f.e_phi) == doctest::Approx(0.0));
  CHECK(norm(f.e_theta) == doctest::Approx(1.0));
  const Vec3 c = cross(f.e_r, f.e_theta);
  for (int i = 0; i < 3; ++i) CHECK(c[i] == doctest::Approx(f.e_phi[i]));
}

TEST_CASE("stereographic projection") {
  const Complex z = stereographic_forward({1.0, 0.0, 0.0});
  CHECK(z.real() == doctest::Approx(1.0));
  CHECK(z.imag() == doctest::Approx(0.0));
  CHECK(std::abs(stereographic_forward(kSouthPole)) == 0.0);
  CHECK_THROWS_AS(stereographic_forward(kNorthPole), DomainError);
  std::mt19937 rng(3);
  std::normal_distribution<double> g(0.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Complex w(g(rng), g(rng));
    const Vec3 x = stereographic_inverse(w);
    CHECK(norm(x) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(stereographic_forward(x) - w) < 1e-12 * (1.0 + std::abs(w)));
  }
}

TEST_CASE("stereographic projection keeps precision near the north pole") {
  // |z| = cot(theta/2)
  for (double th : {1e-2, 1e-4, 1e-6}) {
    const Vec3 x = spherical_to_cartesian({1.0, th, 0.3});
    const double r = std::abs(stereographic_forward(x));
    CHECK(r * std::tan(0.5 * th) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("surface operators on spherical harmonics") {
  auto z = [](double t, double) { return std::cos(t); };
  auto xy = [](double t, double p) { return std::sin(t) * std::sin(t) * std::cos(p) * std::sin(p); };
  for (double t : {0.4, 1.2, 2.5}) {
    CHECK(laplace_beltrami(z, t, 0.3, 1e-4) == doctest::Approx(-2.0 * std::cos(t)).epsilon(1e-6));
    CHECK(laplace_beltrami(xy, t, 0.3, 1e-4) == doctest::Approx(-6.0 * xy(t, 0.3)).epsilon(1e-6));
    const auto g = surface_gradient(z, t, 0.3, 1e-5);
    CHECK(g.a_theta == doctest::Approx(-std::sin(t)).epsilon(1e-8));
    CHECK(std::abs(g.a_phi) < 1e-9);
  }
  const Vec3 sing[] = {kNorthPole};
  CHECK_THROWS_AS(laplace_beltrami(z, 1e-3, 0.0, 1e-4, sing), StencilContamination);
}

TEST_CASE("3d operators on the radial source field") {
  for (double t : {0.5, 1.5, 2.8}) {
    const Vec3 x = spherical_to_cartesian(SphericalPoint::make(1.0, t, 1.0));
    const OperatorValue v = ns_operator_3d(radial_source, x, 1e-3);
    CHECK(v.divergence == doctest::Approx(1.0).epsilon(1e-9));
    const Vec3 er = basis_vectors(t, 1.0).e_r;
    for (int i = 0; i < 3; ++i) CHECK(v.momentum[i] == doctest::Approx(er[i]).epsilon(1e-8));
    // Euler operator drops the viscous 2 e_r.
    const OperatorValue e = ns_operator_3d(radial_source, x, 1e-3, false);
    for (int i = 0; i < 3; ++i) CHECK(e.momentum[i] == doctest::Approx(-er[i]).epsilon(1e-8));
  }
  const Vec3 sing[] = {kNorthPole};
  const Vec3 near = spherical_to_cartesian(SphericalPoint::make(1.0, 5e-3, 0.0));
  CHECK_THROWS_AS(ns_operator_3d(radial_source, near, 1e-3, true, sing), StencilContamination);
}

TEST_CASE("gradient tensor agrees with the Cartesian Jacobian") {
  // J = I - 2 e_r e_r^T on the unit sphere for x/|x|^2.
  const Tensor3 t = gradient_tensor_axisym(radial_source, 1.1, 1.0, 1e-3);
  const double expect[9] = {-1, 0, 0, 0, 1, 0, 0, 0, 1};
  for (int i = 0; i < 9; ++i) CHECK(t[i] == doctest::Approx(expect[i]).epsilon(1e-9));

  // A field with all components and theta-dependence, compared with 3D finite differences.
  auto f = [](double th, double) {
    return FieldSample{std::cos(th), std::sin(th) * std::cos(th), 0.3 * std::sin(th), 0.0};
  };
  for (double th : {0.6, 1.9}) {
    const Tensor3 a = gradient_tensor_axisym(f, th, 2.0, 1e-3);
    const Vec3 x = spherical_to_cartesian(SphericalPoint::make(2.0, th, 0.0));
    const Tensor3 b = to_spherical_frame(jacobian_3d(f, x, 1e-3), th, 0.0);
    for (int i = 0; i < 9; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-7));
  }
  auto swirl_phi = [](double th, double ph) { return FieldSample{std::cos(ph), 0, 0, th}; };
  CHECK_THROWS_AS(gradient_tensor_axisym(swirl_phi, 1.0, 1.0, 1e-3), InvalidArgument);
}

TEST_CASE("rotation between unit vectors") {
  const Vec3 a = normalized({1, 2, 3}), b = normalized({-2, 0.5, 1});
  const Tensor3 r = rotation_between(a, b);
  const Vec3 ra = apply(r, a);
  for (int i = 0; i < 3; ++i) CHECK(ra[i] == doctest::Approx(b[i]));
  const Vec3 back = apply_transpose(r, b);
  for (int i = 0; i < 3; ++i) CHECK(back[i] == doctest::Approx(a[i]));
  const Tensor3 flip = rotation_between(kSouthPole, kNorthPole);
  const Vec3 n = apply(flip, kSouthPole);
  CHECK(n[2] == doctest::Approx(1.0));
  const Vec3 w = apply(flip, {0.3, 0.4, 0.5});
  CHECK(norm(w) == doctest::Approx(norm(Vec3{0.3, 0.4, 0.5})));
}
