#pragma once

#include "hns/geometry.hpp"

#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace hns {

class SolutionSpec;

namespace family {

/// Landau jets: u_theta = 2 sin(theta) / ((2 - sigma)/sigma + cos(theta)).
struct Landau {
  double sigma;
};

/// Axisymmetric no-swirl solutions smooth on the sphere minus the south pole,
/// labelled by tau = lim sin(theta) u_theta at S and sigma = lim u_theta/sin(theta) at N.
struct NoSwirlOneSing {
  double tau;
  double sigma;
};

/// The c3 = -4 logarithmic family, defined for theta in (theta0, pi).
struct TypeTwoLog {
  double alpha;
};

/// The c3 = 1/2 family built from complete elliptic integrals. `infinite`
/// selects the alpha = +infinity member.
struct EllipticC3Half {
  double alpha;
  bool infinite = false;
};

/// f = a z^alpha.
struct PowerLiouville {
  double alpha;
  double a_abs;
};

/// f = a exp(b z), b = b1 + i b2.
struct ExpLiouville {
  double a_abs;
  double b1;
  double b2;
};

/// f = exp(z^k).
struct ExpPowerLiouville {
  int k;
};

/// |a| -> 0 limit of the power family with alpha = sign.
struct LimitPole {
  int sign;
};

/// Euler-only no-swirl solutions, U_theta^2 / 2 = c0 + c1 y + c2 y^2.
struct EulerNoSwirl {
  double c0, c1, c2;
  int sign;
};

/// Perfect-square Euler solutions that also solve Navier-Stokes.
struct EulerNS {
  double a;
  double b;
};

/// The unique c = (0, 0, -4) solution on the sphere minus both poles.
struct SpecialGlobalC3m4 {};

/// Adds the swirl C / |x'| e_phi to an axisymmetric no-swirl base solution.
struct WithConstantSwirl {
  std::shared_ptr<const SolutionSpec> base;
  double swirl;
};

} // namespace family

using SolutionVariant =
    std::variant<family::Landau, family::NoSwirlOneSing, family::TypeTwoLog, family::EllipticC3Half,
                 family::PowerLiouville, family::ExpLiouville, family::ExpPowerLiouville,
                 family::LimitPole, family::EulerNoSwirl, family::EulerNS, family::SpecialGlobalC3m4,
                 family::WithConstantSwirl>;

/// Where a solution is defined: theta in (theta_min, theta_max) minus the
/// excluded (singular) points.
struct DomainDescriptor {
  double theta_min = 0.0;
  double theta_max = kPi;
  std::vector<Vec3> excluded_points;

  bool contains(double theta) const { return theta > theta_min && theta < theta_max; }
  bool smooth() const { return excluded_points.empty() && theta_min == 0.0 && theta_max == kPi; }
};

/// Validated, immutable description of one catalog solution.
class SolutionSpec {
public:
  /// Throws InvalidArgument when parameters leave the admissible region.
  SolutionSpec(SolutionVariant v);

  const SolutionVariant &variant() const { return v_; }
  const DomainDescriptor &domain() const { return domain_; }

  /// snake_case family tag used in JSON.
  std::string tag() const;

  bool axisymmetric() const;
  bool no_swirl() const;
  /// False only for Euler-only members.
  bool navier_stokes() const;

  /// Constant c3 of the reduced no-swirl equation for the families that
  /// carry one (used to fix the pressure); 0 otherwise.
  double c3() const { return c3_; }

private:
  SolutionVariant v_;
  DomainDescriptor domain_;
  double c3_ = 0.0;
};

/// Velocity and pressure on the unit sphere. Throws DomainError outside
/// domain_of(spec).
FieldSample evaluate(const SolutionSpec &spec, double theta, double phi);

const DomainDescriptor &domain_of(const SolutionSpec &spec);

/// Convenience wrapper usable wherever a SphereField is expected.
SphereField as_field(const SolutionSpec &spec);

/// The unique global solution for c = (0, 0, -4).
SolutionSpec special_global_c3m4();

/// Pressure from the radial momentum balance,
///   p = -1/2 (Lap_S u_r - u_theta d_theta u_r - u_phi / sin(theta) d_phi u_r + |u|^2),
/// with sixth-order central differences of step h in theta and phi.
/// `viscous` false drops the Laplacian (Euler pressure).
double pressure_from_velocity(const SphereField &u, double theta, double phi, double h = 2e-3,
                              bool viscous = true);

/// Root of cos(theta) + sin^2(theta) (ln cot(theta/2) + alpha) on (0, pi).
double type_two_log_theta0(double alpha);

/// Landau jet parameter sigma equivalent to a power Liouville member with alpha = +-1.
bool is_landau(const SolutionSpec &spec);

} // namespace hns
