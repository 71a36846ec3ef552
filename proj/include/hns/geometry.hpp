#pragma once

#include <array>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace hns {

using Vec3 = std::array<double, 3>;
using Complex = std::complex<double>;

/// 3x3 tensor stored row-major. In the spherical frame the row index is the
/// velocity component and the column index the differentiation direction,
/// both ordered (e_r, e_theta, e_phi).
using Tensor3 = std::array<double, 9>;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr Vec3 kNorthPole{0.0, 0.0, 1.0};
inline constexpr Vec3 kSouthPole{0.0, 0.0, -1.0};

double dot(const Vec3 &a, const Vec3 &b);
Vec3 cross(const Vec3 &a, const Vec3 &b);
double norm(const Vec3 &a);
Vec3 normalized(const Vec3 &a);
Vec3 operator+(const Vec3 &a, const Vec3 &b);
Vec3 operator-(const Vec3 &a, const Vec3 &b);
Vec3 operator*(double s, const Vec3 &a);

/// Point in spherical coordinates; theta is the colatitude measured from the
/// positive x3 axis, phi the azimuth. Poles are excluded coordinates.
struct SphericalPoint {
  double r;
  double theta;
  double phi;

  /// Validates r > 0 and 0 < theta < pi; phi is wrapped into [0, 2pi).
  static SphericalPoint make(double r, double theta, double phi);
};

/// Orthonormal frame (e_r, e_theta, e_phi) at a non-pole point.
struct Frame {
  Vec3 e_r;
  Vec3 e_theta;
  Vec3 e_phi;
};

/// Velocity components in the spherical frame plus pressure.
struct FieldSample {
  double u_r = 0.0;
  double u_theta = 0.0;
  double u_phi = 0.0;
  double p = 0.0;
};

struct TangentVector {
  double a_theta = 0.0;
  double a_phi = 0.0;
};

Vec3 spherical_to_cartesian(const SphericalPoint &p);
Frame basis_vectors(double theta, double phi);
inline Frame basis_vectors(const SphericalPoint &p) { return basis_vectors(p.theta, p.phi); }

/// Inverse of spherical_to_cartesian; phi in [0, 2pi). Rejects the zero vector.
SphericalPoint cartesian_to_spherical(const Vec3 &x);

/// z = (x1 + i x2) / (1 - x3). Throws DomainError at the north pole.
Complex stereographic_forward(const Vec3 &x);
Vec3 stereographic_inverse(Complex z);

/// Scales a sample taken on the unit sphere to the point x using the
/// homogeneity degrees -1 (velocity) and -2 (pressure).
FieldSample extend_homogeneous(const FieldSample &on_sphere, const Vec3 &x);

/// Field restricted to the unit sphere, in (theta, phi).
using SphereField = std::function<FieldSample(double theta, double phi)>;
using SphereScalar = std::function<double(double theta, double phi)>;

/// Cartesian velocity of the homogeneous extension of `field` at x. If
/// `pressure` is non-null it receives the extended pressure.
Vec3 velocity_cartesian(const SphereField &field, const Vec3 &x, double *pressure = nullptr);

/// Throws StencilContamination if any of `points` lies within angular
/// (chord) distance `radius` of a singular point.
void check_stencil(std::span<const Vec3> points, std::span<const Vec3> singular, double radius);

/// Central-difference surface gradient (d/dtheta, (1/sin theta) d/dphi).
TangentVector surface_gradient(const SphereScalar &f, double theta, double phi, double h,
                               std::span<const Vec3> singular = {});

/// Spherical Laplace-Beltrami operator by central differences.
double laplace_beltrami(const SphereScalar &f, double theta, double phi, double h,
                        std::span<const Vec3> singular = {});

/// Result of the 3D operators at one point.
struct OperatorValue {
  Vec3 momentum{};  ///< -viscosity * Laplacian(u) + (u.grad)u + grad p
  double divergence = 0.0;
  /// Largest magnitude among the viscous, advective and pressure terms.
  double scale = 0.0;
};

/// Richardson-paired (h, h/2) fourth-order central-difference evaluation of
/// the stationary momentum operator and of div u on the homogeneous extension. `viscous`
/// false evaluates the Euler operator. Throws StencilContamination when a
/// stencil point is within 10h of a singular ray.
OperatorValue ns_operator_3d(const SphereField &field, const Vec3 &x, double h, bool viscous = true,
                             std::span<const Vec3> singular = {});

double divergence_3d(const SphereField &field, const Vec3 &x, double h,
                     std::span<const Vec3> singular = {});

/// Cartesian Jacobian J(i, j) = d u_i / d x_j by Richardson-paired central differences.
Tensor3 jacobian_3d(const SphereField &field, const Vec3 &x, double h);

/// Expresses a Cartesian tensor in the spherical frame at (theta, phi).
Tensor3 to_spherical_frame(const Tensor3 &cartesian, double theta, double phi);

/// Axisymmetric sample together with its theta-derivatives on the sphere.
struct AxisymmetricJet {
  FieldSample value;
  double du_r = 0.0;
  double du_theta = 0.0;
  double du_phi = 0.0;
};

/// Velocity gradient of a (-1)-homogeneous axisymmetric field at radius r.
Tensor3 gradient_tensor_axisym(const AxisymmetricJet &jet, double theta, double r);

/// Same, with theta-derivatives taken by fourth-order central differences of
/// `field`. Throws InvalidArgument if the field is visibly phi-dependent.
Tensor3 gradient_tensor_axisym(const SphereField &field, double theta, double r, double h);

/// Fourth-order central-difference theta-derivative jet of an axisymmetric field.
AxisymmetricJet axisymmetric_jet(const SphereField &field, double theta, double h);

/// Frobenius norm.
double frobenius(const Tensor3 &t);

/// Rotation matrix (row-major) taking `from` to `to` within the plane they
/// span; identity if equal, rotation by pi about e_1 if antipodal.
Tensor3 rotation_between(const Vec3 &from, const Vec3 &to);
Vec3 apply(const Tensor3 &m, const Vec3 &v);
Vec3 apply_transpose(const Tensor3 &m, const Vec3 &v);

} // namespace hns
