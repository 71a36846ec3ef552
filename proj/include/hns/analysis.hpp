#pragma once

#include "hns/families.hpp"
#include "hns/geometry.hpp"

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hns {

/// Sample points: n_theta colatitudes spread over the domain's theta range,
/// n_phi azimuths, and every radius.
struct GridSpec {
  int n_theta = 20;
  int n_phi = 10;
  std::vector<double> radii{1.0};
  /// Finite-difference step relative to the local length scale: r times
  /// min(1, distance to singular points and domain edges), capped by |u| / |grad u|.
  double step = 2e-2;
  /// Points with r |u| above this are not resolvable to an absolute
  /// tolerance in double precision and are excluded.
  double max_speed = std::numeric_limits<double>::infinity();
  /// Points closer than this (radians) to a singular point or domain edge are excluded.
  double margin = 0.0;
};

struct ResidualReport {
  double max_momentum = 0.0;
  double rms_momentum = 0.0;
  double max_divergence = 0.0;
  /// max over usable points of |momentum| / (largest individual term).
  double max_relative = 0.0;
  int n_points = 0;
  int excluded = 0;
};

/// Anything that can be evaluated on the sphere with known exclusions.
struct FieldSource {
  SphereField field;
  DomainDescriptor domain;
};

FieldSource source_of(const SolutionSpec &spec);

/// Full 3D stationary Navier-Stokes residual (OpenMP over grid points).
/// Points whose stencils reach a singular point or leave the domain count as
/// excluded. Throws Inconclusive if nothing usable remains.
ResidualReport ns_residual(const FieldSource &src, const GridSpec &grid);
ResidualReport euler_residual(const FieldSource &src, const GridSpec &grid);
inline ResidualReport ns_residual(const SolutionSpec &s, const GridSpec &g) { return ns_residual(source_of(s), g); }
inline ResidualReport euler_residual(const SolutionSpec &s, const GridSpec &g) {
  return euler_residual(source_of(s), g);
}

/// Single-threaded reference with identical arithmetic.
ResidualReport residual_serial(const FieldSource &src, const GridSpec &grid, bool viscous);
ResidualReport residual_parallel(const FieldSource &src, const GridSpec &grid, bool viscous);

/// Grid points (unit sphere, before scaling by the radii) used by the sweeps.
std::vector<std::pair<double, double>> sphere_grid(const DomainDescriptor &domain, int n_theta, int n_phi);

/// Angular distance from (theta, phi) to the nearest singular point or domain edge.
double clearance(const DomainDescriptor &domain, double theta, double phi);

// ---------------------------------------------------------------------------
// Asymptotics near a pole

enum class SingularityType { Type1, Type2, Type3, Removable, Inconclusive };
enum class GradientType { Type1p, Type2p, Type3p, Inconclusive };

std::string to_string(SingularityType t);
std::string to_string(GradientType t);

struct Thresholds {
  double tau = 1e-2;
  double sigma = 1e-2;
  double kappa = 1e-2;
  double grad_q2 = 1e-2;
  double grad_q1 = 1e-2;
};

/// Limit of a sequence g(d_k) sampled at d_k = 1e-2 * 10^(-k/2), k = 0..6.
struct Extrapolation {
  double value = 0.0;
  /// Spread between the competing models; small means consistent.
  double spread = 0.0;
  std::string model;
};

/// Picks among Aitken (power-law tails), a rational model in ln d
/// (logarithmic tails) and polynomial extrapolation in 1/ln d by
/// leave-one-out prediction error.
Extrapolation extrapolate_limit(const std::vector<double> &dists, const std::vector<double> &values);

/// Geometric ladder used by the extractors.
std::vector<double> distance_ladder();

/// Point at angular distance d from `pole` in direction psi, with the unit
/// vectors pointing away from the pole (e_d) and around it (e_psi).
struct PolarProbe {
  Vec3 x;
  Vec3 e_d;
  Vec3 e_psi;
};
PolarProbe probe_near(const Vec3 &pole, double d, double psi);

/// Two readings of |x'| u_phi on the distance ladder: a constant and
/// d1 ln|x'| + d2. Reported side by side when eta = 0.
struct SwirlFits {
  double constant = 0.0;
  double constant_rms = 0.0;
  double log_slope = 0.0;
  double log_intercept = 0.0;
  double log_rms = 0.0;
};
SwirlFits fit_swirl(const FieldSource &src, const Vec3 &pole);

struct SingularityReport {
  Vec3 pole{};
  double tau_hat = 0.0;
  std::optional<double> eta_hat;
  double kappa_hat = 0.0;
  double sigma_hat = 0.0;
  SingularityType type = SingularityType::Inconclusive;
  double confidence = 0.0;
  bool kappa_nonlinear = false;
  std::optional<SwirlFits> swirl; ///< set when eta_hat == 0
};

/// lim |x'| u_theta; u_theta measured along -e_d at S and general points,
/// along +e_d at N, so that it matches the colatitude convention at both poles.
Extrapolation extract_tau(const FieldSource &src, const Vec3 &pole);
/// lim |x'| u_phi (around the pole).
Extrapolation extract_sigma(const FieldSource &src, const Vec3 &pole);
/// lim (|x'| u_theta - 2) ln |x'|. Throws InvalidArgument unless tau is within 0.05 of 2.
Extrapolation extract_eta(const FieldSource &src, const Vec3 &pole);
/// 0 or 2 when the fit lies within 0.1 of either, otherwise empty.
std::optional<double> snap_eta(double fit);

struct LogSlopeFit {
  double kappa = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  bool nonlinear = false;
};
/// Least squares |u| ~ kappa |ln d| + c over 8 azimuths and d in [1e-5, 1e-2].
LogSlopeFit extract_log_slope(const FieldSource &src, const Vec3 &pole);

SingularityReport classify(const FieldSource &src, const Vec3 &pole, const Thresholds &th = {});

/// True when the fitted behaviour near the pole is u = o(ln d): no 1/d term
/// (tau, sigma) and no |ln d| term (kappa), i.e. classify gives Type1 or Removable.
bool removability_test(const FieldSource &src, const Vec3 &pole, const Thresholds &th = {});

struct GradientReport {
  double q2 = 0.0; ///< lim d^2 |grad u|
  double q1 = 0.0; ///< lim d |grad u|
  GradientType type = GradientType::Inconclusive;
};
/// Requires an axisymmetric field; pole must be N or S.
GradientReport gradient_classify(const FieldSource &src, const Vec3 &pole, const Thresholds &th = {});

/// Smallest K with |u| <= K / (d ln d)^2 on the ladder d in [1e-5, 1e-2],
/// 8 azimuths, plus the extrapolated limit of d^2 ln^2(d) u_r.
struct GrowthBound {
  double K = 0.0;
  double saturation = 0.0;
  /// max of |u| (d ln d)^2 over d < 1e-3.5 divided by its max over d >= 1e-3.5.
  /// Stays bounded when the envelope holds all the way to the pole.
  double trend = 1.0;
};
GrowthBound growth_bound(const FieldSource &src, const Vec3 &pole);

} // namespace hns
