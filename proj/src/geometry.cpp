#include "hns/geometry.hpp"

#include "hns/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hns {

double dot(const Vec3 &a, const Vec3 &b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 cross(const Vec3 &a, const Vec3 &b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm(const Vec3 &a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3 &a) {
  const double n = norm(a);
  if (n == 0.0) throw InvalidArgument("cannot normalize the zero vector");
  return (1.0 / n) * a;
}

Vec3 operator+(const Vec3 &a, const Vec3 &b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 operator-(const Vec3 &a, const Vec3 &b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 operator*(double s, const Vec3 &a) { return {s * a[0], s * a[1], s * a[2]}; }

SphericalPoint SphericalPoint::make(double r, double theta, double phi) {
  if (!(r > 0.0)) throw InvalidArgument("spherical point requires r > 0");
  if (!(theta > 0.0 && theta < kPi)) throw InvalidArgument("spherical point requires 0 < theta < pi");
  double wrapped = std::fmod(phi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  return {r, theta, wrapped};
}

Vec3 spherical_to_cartesian(const SphericalPoint &p) {
  const double st = std::sin(p.theta);
  return {p.r * st * std::cos(p.phi), p.r * st * std::sin(p.phi), p.r * std::cos(p.theta)};
}

Frame basis_vectors(double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  return {{st * cp, st * sp, ct}, {ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

SphericalPoint cartesian_to_spherical(const Vec3 &x) {
  const double r = norm(x);
  if (r == 0.0) throw InvalidArgument("zero vector has no spherical coordinates");
  const double rho = std::hypot(x[0], x[1]);
  double phi = std::atan2(x[1], x[0]);
  if (phi < 0.0) phi += 2.0 * kPi;
  return {r, std::atan2(rho, x[2]), phi};
}

Complex stereographic_forward(const Vec3 &x) {
  // 1 - x3 cancels near the north pole; use (x1^2 + x2^2)/(1 + x3) there
  const double denom = x[2] > 0.0 ? (x[0] * x[0] + x[1] * x[1]) / (1.0 + x[2]) : 1.0 - x[2];
  if (denom <= 0.0) throw DomainError("stereographic projection: the north pole maps to infinity");
  return {x[0] / denom, x[1] / denom};
}

Vec3 stereographic_inverse(Complex z) {
  const double m = std::norm(z);
  const double s = 1.0 / (1.0 + m);
  return {2.0 * z.real() * s, 2.0 * z.imag() * s, (m - 1.0) * s};
}

FieldSample extend_homogeneous(const FieldSample &on_sphere, const Vec3 &x) {
  const double r = norm(x);
  if (r == 0.0) throw InvalidArgument("homogeneous extension is undefined at the origin");
  return {on_sphere.u_r / r, on_sphere.u_theta / r, on_sphere.u_phi / r, on_sphere.p / (r * r)};
}

Vec3 velocity_cartesian(const SphereField &field, const Vec3 &x, double *pressure) {
  const SphericalPoint sp = cartesian_to_spherical(x);
  const FieldSample s = extend_homogeneous(field(sp.theta, sp.phi), x);
  if (pressure) *pressure = s.p;
  const Frame f = basis_vectors(sp.theta, sp.phi);
  return s.u_r * f.e_r + s.u_theta * f.e_theta + s.u_phi * f.e_phi;
}

void check_stencil(std::span<const Vec3> points, std::span<const Vec3> singular, double radius) {
  for (const Vec3 &q : points) {
    const Vec3 qh = normalized(q);
    for (const Vec3 &s : singular) {
      if (norm(qh - s) <= radius) {
        throw StencilContamination("stencil point within " + std::to_string(radius) +
                                   " of a singular point");
      }
    }
  }
}

namespace {

void check_surface_stencil(double theta, double phi, double h, std::span<const Vec3> singular) {
  if (theta - h <= 0.0 || theta + h >= kPi) {
    throw StencilContamination("surface stencil crosses a coordinate pole");
  }
  if (singular.empty()) return;
  const Vec3 c = spherical_to_cartesian({1.0, theta, phi});
  const Vec3 pts[1] = {c};
  check_stencil(pts, singular, 10.0 * h);
}

} // namespace

TangentVector surface_gradient(const SphereScalar &f, double theta, double phi, double h,
                               std::span<const Vec3> singular) {
  if (!(h > 0.0)) throw InvalidArgument("surface_gradient: step must be positive");
  check_surface_stencil(theta, phi, h, singular);
  const double dth = (f(theta + h, phi) - f(theta - h, phi)) / (2.0 * h);
  const double dph = (f(theta, phi + h) - f(theta, phi - h)) / (2.0 * h);
  return {dth, dph / std::sin(theta)};
}

double laplace_beltrami(const SphereScalar &f, double theta, double phi, double h,
                        std::span<const Vec3> singular) {
  if (!(h > 0.0)) throw InvalidArgument("laplace_beltrami: step must be positive");
  check_surface_stencil(theta, phi, h, singular);
  const double f0 = f(theta, phi);
  const double ftp = f(theta + h, phi), ftm = f(theta - h, phi);
  const double fpp = f(theta, phi + h), fpm = f(theta, phi - h);
  const double st = std::sin(theta);
  const double d2t = (ftp - 2.0 * f0 + ftm) / (h * h);
  const double d1t = (ftp - ftm) / (2.0 * h);
  const double d2p = (fpp - 2.0 * f0 + fpm) / (h * h);
  return d2t + std::cos(theta) / st * d1t + d2p / (st * st);
}

namespace {

void check_ray_distance(const Vec3 &x, double clearance, std::span<const Vec3> singular) {
  for (const Vec3 &s : singular) {
    const double along = dot(x, s);
    const double dist = along > 0.0 ? norm(x - along * s) : norm(x);
    if (dist <= clearance) {
      throw StencilContamination("3D stencil within " + std::to_string(clearance) +
                                 " of a singular ray");
    }
  }
}

OperatorValue operator_at_step(const SphereField &field, const Vec3 &x, double h, bool viscous) {
  // Fourth-order five-point stencils along each axis.
  double p0 = 0.0;
  const Vec3 u0 = velocity_cartesian(field, x, &p0);
  Vec3 u[3][4];
  double p[3][4];
  static constexpr double offs[4] = {-2.0, -1.0, 1.0, 2.0};
  for (int k = 0; k < 3; ++k)
    for (int m = 0; m < 4; ++m) {
      Vec3 xs = x;
      xs[k] += offs[m] * h;
      u[k][m] = velocity_cartesian(field, xs, &p[k][m]);
    }
  auto d1 = [h](double fm2, double fm1, double fp1, double fp2) {
    return (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  };
  auto d2 = [h](double fm2, double fm1, double f0, double fp1, double fp2) {
    return (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  };
  OperatorValue out;
  for (int i = 0; i < 3; ++i) {
    double lap = 0.0, adv = 0.0;
    for (int k = 0; k < 3; ++k) {
      lap += d2(u[k][0][i], u[k][1][i], u0[i], u[k][2][i], u[k][3][i]);
      adv += u0[k] * d1(u[k][0][i], u[k][1][i], u[k][2][i], u[k][3][i]);
    }
    const double gp = d1(p[i][0], p[i][1], p[i][2], p[i][3]);
    out.momentum[i] = (viscous ? -lap : 0.0) + adv + gp;
    out.scale = std::max({out.scale, viscous ? std::abs(lap) : 0.0, std::abs(adv), std::abs(gp)});
    out.divergence += d1(u[i][0][i], u[i][1][i], u[i][2][i], u[i][3][i]);
  }
  return out;
}

} // namespace

OperatorValue ns_operator_3d(const SphereField &field, const Vec3 &x, double h, bool viscous,
                             std::span<const Vec3> singular) {
  if (!(h > 0.0)) throw InvalidArgument("ns_operator_3d: step must be positive");
  check_ray_distance(x, 12.0 * h, singular);
  const OperatorValue coarse = operator_at_step(field, x, h, viscous);
  const OperatorValue fine = operator_at_step(field, x, 0.5 * h, viscous);
  OperatorValue out;
  for (int i = 0; i < 3; ++i) out.momentum[i] = (16.0 * fine.momentum[i] - coarse.momentum[i]) / 15.0;
  out.divergence = (16.0 * fine.divergence - coarse.divergence) / 15.0;
  out.scale = fine.scale;
  return out;
}

double divergence_3d(const SphereField &field, const Vec3 &x, double h,
                     std::span<const Vec3> singular) {
  if (!(h > 0.0)) throw InvalidArgument("divergence_3d: step must be positive");
  check_ray_distance(x, 11.0 * h, singular);
  auto at_step = [&](double s) {
    double div = 0.0;
    for (int k = 0; k < 3; ++k) {
      Vec3 xp = x, xm = x;
      xp[k] += s;
      xm[k] -= s;
      div += (velocity_cartesian(field, xp)[k] - velocity_cartesian(field, xm)[k]) / (2.0 * s);
    }
    return div;
  };
  return (4.0 * at_step(0.5 * h) - at_step(h)) / 3.0;
}

Tensor3 jacobian_3d(const SphereField &field, const Vec3 &x, double h) {
  auto at_step = [&](double s) {
    Tensor3 j{};
    for (int k = 0; k < 3; ++k) {
      Vec3 xp = x, xm = x;
      xp[k] += s;
      xm[k] -= s;
      const Vec3 up = velocity_cartesian(field, xp), um = velocity_cartesian(field, xm);
      for (int i = 0; i < 3; ++i) j[3 * i + k] = (up[i] - um[i]) / (2.0 * s);
    }
    return j;
  };
  const Tensor3 coarse = at_step(h), fine = at_step(0.5 * h);
  Tensor3 out{};
  for (int i = 0; i < 9; ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

Tensor3 to_spherical_frame(const Tensor3 &c, double theta, double phi) {
  const Frame f = basis_vectors(theta, phi);
  const Vec3 e[3] = {f.e_r, f.e_theta, f.e_phi};
  Tensor3 out{};
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) s += e[a][i] * c[3 * i + j] * e[b][j];
      out[3 * a + b] = s;
    }
  }
  return out;
}

Tensor3 gradient_tensor_axisym(const AxisymmetricJet &jet, double theta, double r) {
  const double ur = jet.value.u_r / r, ut = jet.value.u_theta / r, up = jet.value.u_phi / r;
  const double dur = jet.du_r / r, dut = jet.du_theta / r, dup = jet.du_phi / r;
  const double cot = std::cos(theta) / std::sin(theta);
  // Rows: component (r, theta, phi); columns: direction (r, theta, phi).
  return {-ur / r,  (dur - ut) / r, -up / r,
          -ut / r,  (dut + ur) / r, -cot * up / r,
          -up / r,  dup / r,        (cot * ut + ur) / r};
}

AxisymmetricJet axisymmetric_jet(const SphereField &field, double theta, double h) {
  const FieldSample m2 = field(theta - 2.0 * h, 0.0), m1 = field(theta - h, 0.0);
  const FieldSample p1 = field(theta + h, 0.0), p2 = field(theta + 2.0 * h, 0.0);
  auto d = [&](double FieldSample::*c) {
    return (m2.*c - 8.0 * (m1.*c) + 8.0 * (p1.*c) - p2.*c) / (12.0 * h);
  };
  return {field(theta, 0.0), d(&FieldSample::u_r), d(&FieldSample::u_theta), d(&FieldSample::u_phi)};
}

Tensor3 gradient_tensor_axisym(const SphereField &field, double theta, double r, double h) {
  const FieldSample a = field(theta, 0.0), b = field(theta, 2.0);
  const double scale = 1.0 + std::abs(a.u_r) + std::abs(a.u_theta) + std::abs(a.u_phi);
  if (std::abs(a.u_r - b.u_r) + std::abs(a.u_theta - b.u_theta) + std::abs(a.u_phi - b.u_phi) >
      1e-9 * scale) {
    throw InvalidArgument("gradient_tensor_axisym: field depends on phi");
  }
  return gradient_tensor_axisym(axisymmetric_jet(field, theta, h), theta, r);
}

double frobenius(const Tensor3 &t) {
  double s = 0.0;
  for (double v : t) s += v * v;
  return std::sqrt(s);
}

Tensor3 rotation_between(const Vec3 &from_in, const Vec3 &to_in) {
  const Vec3 from = normalized(from_in), to = normalized(to_in);
  const double c = dot(from, to);
  Vec3 axis = cross(from, to);
  const double s = norm(axis);
  if (s < 1e-15) {
    if (c > 0.0) return {1, 0, 0, 0, 1, 0, 0, 0, 1};
    // Antipodal: rotate by pi about an axis orthogonal to `from`.
    Vec3 helper = std::abs(from[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
    axis = normalized(cross(from, helper));
    Tensor3 m{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m[3 * i + j] = 2.0 * axis[i] * axis[j] - (i == j ? 1.0 : 0.0);
    return m;
  }
  axis = (1.0 / s) * axis;
  // Rodrigues: R = c I + s [k]_x + (1 - c) k k^T
  const double k0 = axis[0], k1 = axis[1], k2 = axis[2];
  const double t = 1.0 - c;
  return {c + t * k0 * k0,      t * k0 * k1 - s * k2, t * k0 * k2 + s * k1,
          t * k1 * k0 + s * k2, c + t * k1 * k1,      t * k1 * k2 - s * k0,
          t * k2 * k0 - s * k1, t * k2 * k1 + s * k0, c + t * k2 * k2};
}

Vec3 apply(const Tensor3 &m, const Vec3 &v) {
  return {m[0] * v[0] + m[1] * v[1] + m[2] * v[2], m[3] * v[0] + m[4] * v[1] + m[5] * v[2],
          m[6] * v[0] + m[7] * v[1] + m[8] * v[2]};
}

Vec3 apply_transpose(const Tensor3 &m, const Vec3 &v) {
  return {m[0] * v[0] + m[3] * v[1] + m[6] * v[2], m[1] * v[0] + m[4] * v[1] + m[7] * v[2],
          m[2] * v[0] + m[5] * v[1] + m[8] * v[2]};
}

} // namespace hns
