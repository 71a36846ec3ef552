#pragma once

#include "hns/families.hpp"
#include "hns/geometry.hpp"
#include "hns/ode.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <ostream>

namespace hns {

/// Axisymmetric reduced state at y = cos(theta). U = u r sin(theta).
/// T, T1, T2 are the nested swirl integral and its first two derivatives,
/// all zero at the anchor.
struct ReducedState {
  double y = 0.0;
  double U_theta = 0.0;
  double U_phi = 0.0;
  double U_phi_prime = 0.0;
  double T = 0.0, T1 = 0.0, T2 = 0.0;
};

/// Right side b1 y^2 + b2 y + b3 of the first reduced equation. For no-swirl
/// data it also equals c1 (1 - y) + c2 (1 + y) + c3 (1 - y^2).
struct ReducedConstants {
  double b1 = 0.0, b2 = 0.0, b3 = 0.0;
  double y0 = 0.0;

  static ReducedConstants from_c(double c1, double c2, double c3, double y0 = 0.0);
  double rhs(double y) const { return (b1 * y + b2) * y + b3; }
  double rhs_prime(double y) const { return 2.0 * b1 * y + b2; }
};

/// -1/2 (sqrt(1 + c1) + sqrt(1 + c2)) (sqrt(1 + c1) + sqrt(1 + c2) + 2).
/// Throws InvalidArgument when c1 or c2 is below -1.
double bar_c3(double c1, double c2);

/// c1 >= -1, c2 >= -1, c3 >= bar_c3(c1, c2).
bool in_J(double c1, double c2, double c3);

/// Dense solution of the reduced system around an anchor.
class Trajectory {
public:
  using Dense = ode::DenseSolution<6>;

  Trajectory(Dense dense, ReducedConstants consts, bool no_swirl, std::optional<double> escape_lo,
             std::optional<double> escape_hi);

  double y_min() const { return dense_.t_min(); }
  double y_max() const { return dense_.t_max(); }
  const ReducedConstants &constants() const { return consts_; }
  bool no_swirl() const { return no_swirl_; }

  /// Where |U_theta| first exceeded the blow-up bound, below and above the anchor.
  std::optional<double> escape_lo() const { return escape_lo_; }
  std::optional<double> escape_hi() const { return escape_hi_; }
  bool blew_up() const { return escape_lo_ || escape_hi_; }

  ReducedState state(double y) const;
  /// dU_theta/dy (= r u_r) from the equation.
  double dU_theta(double y) const;
  /// Defect of the first reduced equation using the interpolant's own derivative.
  double invariant_defect(double y) const;
  double max_invariant_defect(int n = 401) const;
  /// True when dU_phi/dy does not change sign (tolerance 1e-12).
  bool swirl_monotone(int n = 401) const;

  /// Anchor data and settings the trajectory was integrated with.
  const ReducedState &origin() const { return origin_; }
  double blowup_bound() const { return blowup_; }
  double rtol() const { return rtol_; }
  void set_origin(const ReducedState &s, double blowup, double rtol) {
    origin_ = s;
    blowup_ = blowup;
    rtol_ = rtol;
  }

private:
  Dense dense_;
  ReducedConstants consts_;
  bool no_swirl_;
  std::optional<double> escape_lo_, escape_hi_;
  ReducedState origin_;
  double blowup_ = 1e8;
  double rtol_ = 1e-10;
};

/// Integrates from init.y (the anchor; T terms must be zero there) down to
/// y_lo and up to y_hi (default rtol 1e-10). Integration in a direction stops when
/// |U_theta| exceeds blowup and the escape point is recorded.
/// Throws InvalidArgument unless -1 + 1e-6 <= y_lo <= init.y <= y_hi <= 1 - 1e-6.
Trajectory integrate_reduced(const ReducedState &init, const ReducedConstants &consts, double y_lo,
                             double y_hi, double blowup = 1e8, double rtol = 1e-10);

/// No-swirl trajectory with U_theta(0) = gamma.
Trajectory integrate_noswirl(double c1, double c2, double c3, double gamma, double y_lo, double y_hi,
                             double blowup = 1e8, double rtol = 1e-10);

/// Limits of U_theta at y = -1 and y = 1 by Richardson extrapolation of the
/// values at 1 - 2^-k eps, k = 0..4.
struct EndpointLimits {
  double at_minus = 0.0;
  double at_plus = 0.0;
  bool converged = false;
};
EndpointLimits endpoint_limits(const Trajectory &t, double eps = 1e-4);

struct RegionProbe {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double gamma_minus_hat = 0.0;
  double gamma_plus_hat = 0.0;
  double bracket_width = 0.0;
};

/// Bisection for the ends of the admissible interval of U_theta(0): the
/// trajectory must stay below 50 in absolute value up to |y| = 1 - 1e-5 and
/// have converging endpoint limits. Throws InvalidArgument outside J.
RegionProbe estimate_gamma_bounds(double c1, double c2, double c3, double width = 1e-3);

/// Velocity and pressure of the homogeneous field carried by a no-swirl
/// trajectory: u_theta = U / sin(theta), u_r = dU/dy, p = u_r - u_theta^2 / 2 + c3.
struct NoSwirlField {
  SphereField field;
  DomainDescriptor domain;
};
/// Throws InvalidArgument for trajectories with swirl.
NoSwirlField reconstruct_noswirl_field(const Trajectory &t, double c3);

/// Profile functions in y for the integral form of the first equation.
struct ReducedProfile {
  std::function<double(double)> U_theta;
  std::function<double(double)> u_r;
  std::function<double(double)> U_phi;
  double y_lo = 0.0, y_hi = 0.0;
};
ReducedProfile profile_of(const Trajectory &t);

/// Largest defect over n points of
///   (1 - y^2) u_r = -2 y U - U^2 / 2 + int_{y0}^{y} U_phi^2 (s - y)(1 - s y) / (1 - s^2)^2 ds
///                   + b1 y^2 + b2 y + b3 + (y - y0)^2 U_phi(y0)^2 / (2 (1 - y0^2)),
/// with b as in the differential form. The last term is the boundary term of
/// the integration by parts that turns the triple integral into the kernel.
double pressure_integral_check(const ReducedProfile &prof, const ReducedConstants &consts, int n = 41);

/// Samples y, U_theta, U_phi, U_phi_prime as CSV in scientific notation
/// with 17 significant digits.
void write_trajectory_csv(const Trajectory &t, std::ostream &os, int n = 201);

} // namespace hns
