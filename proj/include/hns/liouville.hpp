#pragma once

// Homogeneous solutions u = grad_S phi - (Lap_S phi) e_r with
// -Lap_S phi + 2 = 2 e^phi, generated by a locally univalent meromorphic f.

#include "hns/families.hpp"
#include "hns/geometry.hpp"

#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace hns {

/// m >= 2 distinct points with integer exponents l_j outside {-1, 0, 1},
/// sum l_j = m - 2, and a basepoint for the integral defining f.
struct SingularityPrescription {
  std::vector<Vec3> points;
  std::vector<int> exponents;
  Complex basepoint{0.5, 0.5};

  /// Throws InvalidArgument on any violated constraint.
  void validate() const;
};

namespace generator {
/// f = a z^alpha (principal branch; the potential only sees |f| and |f'|).
struct Power {
  double alpha;
  Complex a{1.0, 0.0};
};
/// f = a exp(b z).
struct Exp {
  Complex a{1.0, 0.0};
  Complex b{1.0, 0.0};
};
/// f = exp(z^k).
struct ExpPower {
  int k;
};
} // namespace generator

using ClosedForm = std::variant<generator::Power, generator::Exp, generator::ExpPower>;

/// f(z) = int_a^z prod_{j<m} (t - z_j)^(l_j - 1) dt with f values cached on a
/// hash grid; safe for concurrent use.
class PathIntegralF {
public:
  PathIntegralF(std::vector<Complex> poles, std::vector<int> exponents, Complex basepoint);

  Complex fprime(Complex z) const;
  /// f''/f' = sum (l_j - 1) / (z - z_j).
  Complex log_derivative(Complex z) const;
  Complex value(Complex z) const;

  /// Integral of f' along a path from p to q that keeps clear of the poles.
  Complex integrate(Complex p, Complex q) const;

  /// Residue of f' at pole j (zero for a single-valued f).
  Complex residue(std::size_t j) const;

  const std::vector<Complex> &poles() const { return poles_; }
  double avoid_radius() const { return radius_; }
  std::size_t cache_size() const;

private:
  Complex segment(Complex p, Complex q) const;
  Complex arc(Complex c, double r, double a0, double a1) const;
  Complex anchor_value(long long ix, long long iy) const;

  std::vector<Complex> poles_;
  std::vector<int> exponents_;
  Complex base_;
  double radius_;
  double cell_;

  struct KeyHash {
    std::size_t operator()(const std::pair<long long, long long> &k) const {
      return std::hash<long long>()(k.first * 1000003LL ^ k.second);
    }
  };
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::pair<long long, long long>, Complex, KeyHash> cache_;
};

/// f, f', f'' at a point.
struct FJet {
  Complex f, fp, fpp;
};

/// Quantities of f that enter the potential, stable when |f| overflows.
struct PotentialJet {
  double log_abs_f2;   ///< ln |f|^2 (may be -inf)
  double log_abs_fp2;  ///< ln |f'|^2
  Complex fpp_over_fp; ///< f'' / f'
  Complex fp_over_f;   ///< f' / f (unused when f = 0)
};

/// A built Liouville solution: generator, rotation sending the last
/// singular point to N, and the resulting field.
class LiouvilleSolution {
public:
  /// Construction from singular points and exponents.
  static LiouvilleSolution build(const SingularityPrescription &p);
  /// Closed-form generator in the unrotated frame.
  static LiouvilleSolution closed_form(const ClosedForm &g);

  FJet f_and_derivatives(Complex z) const;
  PotentialJet potential_jet(Complex z) const;

  /// Compensated potential ln(|f'|^2 (1 + |z|^2)^2 / (1 + |f|^2)^2) = phi at F(z).
  double xi_hat(Complex z) const;
  /// phi at a point of the sphere (original frame).
  double phi(const Vec3 &x) const;

  /// Cartesian velocity on the unit sphere. Throws DomainError within 1e-5
  /// (angular) of a singular point.
  Vec3 velocity(const Vec3 &x) const;
  /// u_r - |u_tan|^2 / 2, the closed form of the pressure for Liouville fields.
  double pressure_identity(const Vec3 &x) const;
  /// -1/2 (Lap_S u_r - u_tan . grad_S u_r + |u|^2) by sixth-order differences
  /// in a local frame where x sits on the equator. Throws StencilContamination
  /// when a singular point is within 5h.
  double pressure(const Vec3 &x, double h = 2e-3) const;

  enum class PressureRoute { Identity, FiniteDifference };
  SphereField as_field(PressureRoute route = PressureRoute::Identity) const;
  const DomainDescriptor &domain() const { return domain_; }

  const Tensor3 &rotation() const { return rot_; }
  /// z_j = F^-1(R P_j) for the prescribed points other than the last.
  const std::vector<Complex> &z_list() const { return z_; }
  const std::optional<SingularityPrescription> &prescription() const { return presc_; }
  const PathIntegralF *path_integral() const { return pif_.get(); }

private:
  LiouvilleSolution() = default;

  std::optional<ClosedForm> closed_;
  std::shared_ptr<const PathIntegralF> pif_;
  std::optional<SingularityPrescription> presc_;
  Tensor3 rot_{1, 0, 0, 0, 1, 0, 0, 0, 1};
  std::vector<Complex> z_;
  DomainDescriptor domain_;
};

/// Fitted coefficient s in |u| ~ s / d + c near one singular point.
struct SlopeFit {
  Vec3 point;
  int exponent = 0;
  double slope = 0.0;
  double expected = 0.0;
  double rms = 0.0;
  bool ok = false;
};

/// For each prescribed point: least squares over 8 directions and
/// d in {1e-2, 10^-2.5, 1e-3, 10^-3.5, 1e-4}.
std::vector<SlopeFit> verify_asymptotics(const LiouvilleSolution &s);

/// Slope fit around an arbitrary point (used for closed forms too).
SlopeFit fit_slope(const LiouvilleSolution &s, const Vec3 &point);

/// -Lap_S phi + 2 - 2 e^phi with a Richardson-extrapolated central-difference
/// Laplacian; the step shrinks to 5% of the distance to the nearest singular point.
double liouville_defect(const LiouvilleSolution &s, double theta, double phi, double h = 1e-3);

} // namespace hns
