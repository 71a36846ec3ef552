#include "hns/families.hpp"

#include "hns/errors.hpp"
#include "hns/specfun.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hns {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

/// Trigonometric quantities computed from half angles so that 1 +- cos(theta)
/// keep full relative accuracy near the poles.
struct Angles {
  double sin, cos, yp, ym, log_cot_half;

  explicit Angles(double theta) {
    const double c2 = std::cos(0.5 * theta), s2 = std::sin(0.5 * theta);
    sin = 2.0 * s2 * c2;
    cos = std::cos(theta);
    yp = 2.0 * c2 * c2;
    ym = 2.0 * s2 * s2;
    log_cot_half = std::log(c2 / s2);
  }
};

/// U = u_theta sin(theta) and U' = dU/dy, y = cos(theta).
struct Profile {
  double U, dU;
};

FieldSample from_profile(const Profile &pr, const Angles &a, double c3) {
  FieldSample s;
  s.u_theta = pr.U / a.sin;
  s.u_r = pr.dU;
  s.p = s.u_r - 0.5 * s.u_theta * s.u_theta + c3;
  return s;
}

double landau_lambda(double sigma) { return (2.0 - sigma) / sigma; }

Profile landau_profile(double sigma, const Angles &a) {
  if (sigma == 0.0) return {0.0, 0.0};
  const double lam = landau_lambda(sigma), y = a.cos, d = lam + y;
  return {2.0 * a.yp * a.ym / d, -2.0 * (y * y + 2.0 * lam * y + 1.0) / (d * d)};
}

bool tau_is_two(double tau) { return std::abs(tau - 2.0) <= 1e-12; }

Profile one_sing_profile(const family::NoSwirlOneSing &f, const Angles &a) {
  const double b = std::abs(1.0 - 0.5 * f.tau);
  if (tau_is_two(f.tau)) {
    const double q = 1.0 - 2.0 * f.sigma;
    const double L = std::log(0.5 * a.yp);
    const double den = q * L - 2.0;
    const double G = 1.0 + 2.0 * q / den;
    const double dG = -2.0 * q * q / (a.yp * den * den);
    return {a.ym * G, -G + a.ym * dG};
  }
  if (f.tau > 2.0) return {(1.0 + b) * a.ym, -(1.0 + b)};
  const double A = 1.0 - 2.0 * f.sigma + b, B = 2.0 * f.sigma - 1.0 + b;
  const double spow = std::exp(-b * std::log(0.5 * a.yp));
  const double D = A * spow + B;
  const double dD = -b * A * spow / a.yp;
  const double k = 2.0 * b * (1.0 - 2.0 * f.sigma - b);
  const double G = 1.0 - b - k / D;
  const double dG = k * dD / (D * D);
  return {a.ym * G, -G + a.ym * dG};
}

/// Limit of sin(theta) u_theta at S actually attained by the profile. It
/// differs from the label on the boundary sigma = 1 - tau/4 of the tau < 2 branch.
double one_sing_effective_tau(const family::NoSwirlOneSing &f) {
  if (tau_is_two(f.tau)) return 2.0;
  if (f.tau > 2.0) return f.tau;
  const double b = 1.0 - 0.5 * f.tau;
  const double A = 1.0 - 2.0 * f.sigma + b;
  return A > 0.0 ? f.tau : 2.0 * (1.0 + b);
}

struct TypeTwoLogParts {
  double num, den;
};

TypeTwoLogParts type_two_log_parts(double alpha, const Angles &a) {
  const double l = a.log_cot_half + alpha;
  return {1.0 - a.cos * l, a.cos + a.sin * a.sin * l};
}

FieldSample type_two_log_sample(double alpha, const Angles &a) {
  const double l = a.log_cot_half + alpha;
  const auto [num, den] = type_two_log_parts(alpha, a);
  FieldSample s;
  s.u_theta = 4.0 * a.sin * num / den;
  s.u_r = -4.0 - 8.0 * num / (den * den);
  s.p = 8.0 * (-2.0 + a.cos * l - a.sin * a.sin * l * l) / (den * den);
  return s;
}

/// chi and chi' for the c3 = 1/2 family, z = cos^2(theta/2).
std::pair<double, double> elliptic_chi(const family::EllipticC3Half &f, const Angles &a) {
  const double z = 0.5 * a.yp, zc = 0.5 * a.ym;
  const EllipticPair P = elliptic_KE(z, zc);
  const EllipticPair Q = elliptic_KE(zc, z);
  if (f.infinite) return {Q.E - z * Q.K, -0.25 * Q.K};
  return {P.E - zc * P.K + f.alpha * (Q.E - z * Q.K), 0.25 * (P.K - f.alpha * Q.K)};
}

FieldSample elliptic_sample(const family::EllipticC3Half &f, const Angles &a) {
  constexpr double c3 = 0.5;
  const auto [chi, dchi] = elliptic_chi(f, a);
  if (chi == 0.0) throw DomainError("EllipticC3Half: denominator vanishes");
  const double y = a.cos, w = a.yp * a.ym;
  const double U = 2.0 * w * dchi / chi;
  const double dU = c3 - (2.0 * y * U + 0.5 * U * U) / w;
  // Differentiated forms of the reduced equation with c1 = c2 = 0.
  const double d2U = (-2.0 * c3 * y - 2.0 * U - U * dU) / w;
  const double d3U = (-2.0 * c3 + 2.0 * y * d2U - 2.0 * dU - dU * dU - U * d2U) / w;
  FieldSample s;
  s.u_theta = U / a.sin;
  s.u_r = dU;
  const double dur = -a.sin * d2U;
  const double d2ur = -a.cos * d2U + a.sin * a.sin * d3U;
  s.p = -0.5 * (d2ur + (a.cos / a.sin - s.u_theta) * dur + s.u_r * s.u_r + s.u_theta * s.u_theta);
  return s;
}

FieldSample power_liouville_sample(const family::PowerLiouville &f, const Angles &a) {
  const double lw = 2.0 * std::log(f.a_abs) + 2.0 * f.alpha * a.log_cot_half;
  const double t = std::tanh(0.5 * lw);
  const double ch = std::cosh(0.5 * lw);
  FieldSample s;
  s.u_theta = 2.0 / a.sin * (-a.cos + f.alpha * t);
  s.u_r = -2.0 + 2.0 * f.alpha * f.alpha / (a.sin * a.sin * ch * ch);
  s.p = s.u_r - 0.5 * s.u_theta * s.u_theta;
  return s;
}

FieldSample exp_liouville_sample(const family::ExpLiouville &f, const Angles &a, double phi) {
  const double beta = f.b1 * std::cos(phi) - f.b2 * std::sin(phi);
  const double gam = f.b1 * std::sin(phi) + f.b2 * std::cos(phi);
  const double ct = std::exp(a.log_cot_half);
  const double g = ct * beta + std::log(f.a_abs);
  const double t = std::tanh(g), ch = std::cosh(g);
  const double s2sq = 0.5 * a.ym; // sin^2(theta/2)
  FieldSample s;
  s.u_theta = -2.0 * (a.cos + 1.0) / a.sin + beta / s2sq * t;
  s.u_phi = 2.0 * gam * ct / a.sin * t;
  s.u_r = -2.0 + (f.b1 * f.b1 + f.b2 * f.b2) / (2.0 * s2sq * s2sq * ch * ch);
  s.p = s.u_r - 0.5 * (s.u_theta * s.u_theta + s.u_phi * s.u_phi);
  return s;
}

FieldSample exp_power_sample(const family::ExpPowerLiouville &f, const Angles &a, double phi) {
  const double k = f.k;
  const double c = std::exp(k * a.log_cot_half);
  const double g = c * std::cos(k * phi);
  const double t = std::tanh(g), ch = std::cosh(g);
  FieldSample s;
  s.u_theta = -2.0 * (a.cos + k) / a.sin + 2.0 * k * std::cos(k * phi) * c / a.sin * t;
  s.u_phi = 2.0 * k * std::sin(k * phi) * c / a.sin * t;
  s.u_r = -2.0 + 2.0 * k * k * (c / a.sin) * (c / a.sin) / (ch * ch);
  s.p = s.u_r - 0.5 * (s.u_theta * s.u_theta + s.u_phi * s.u_phi);
  return s;
}

FieldSample limit_pole_sample(int sign, const Angles &a) {
  FieldSample s;
  s.u_r = -2.0;
  if (sign > 0) {
    s.u_theta = -2.0 * a.yp / a.sin;
    s.p = -4.0 * a.yp / (a.sin * a.sin);
  } else {
    s.u_theta = 2.0 * a.ym / a.sin;
    s.p = -4.0 * a.ym / (a.sin * a.sin);
  }
  return s;
}

FieldSample euler_no_swirl_sample(const family::EulerNoSwirl &f, const Angles &a) {
  const double y = a.cos;
  const double Q = f.c0 + f.c1 * y + f.c2 * y * y;
  if (!(Q > 0.0)) throw DomainError("EulerNoSwirl: quadratic vanishes at this point");
  const double sg = f.sign, r2Q = std::sqrt(2.0 * Q), dQ = f.c1 + 2.0 * f.c2 * y;
  FieldSample s;
  s.u_theta = sg * r2Q / a.sin;
  s.u_r = sg * dQ / r2Q;
  const double dur_dy = sg * (2.0 * f.c2 / r2Q - dQ * dQ / (r2Q * r2Q * r2Q));
  const double dur = -a.sin * dur_dy;
  s.p = -0.5 * (s.u_r * s.u_r + s.u_theta * s.u_theta - s.u_theta * dur);
  return s;
}

FieldSample euler_ns_sample(double A, double B, const Angles &a) {
  FieldSample s;
  s.u_theta = (A * a.cos + B) / a.sin;
  s.u_r = A;
  s.p = -(A * A + B * B + 2.0 * A * B * a.cos) / (2.0 * a.sin * a.sin);
  return s;
}

FieldSample eval_variant(const SolutionSpec &spec, double theta, double phi);

double elliptic_root(const family::EllipticC3Half &f) {
  auto chi = [&](double th) { return elliptic_chi(f, Angles(th)).first; };
  return bisect_root(chi, 1e-12, kPi - 1e-12, 1e-14);
}

void add_pole(DomainDescriptor &d, const Vec3 &p) {
  for (const auto &q : d.excluded_points)
    if (q == p) return;
  d.excluded_points.push_back(p);
}

void require(bool ok, const std::string &msg) {
  if (!ok) throw InvalidArgument(msg);
}

bool finite(double v) { return std::isfinite(v); }

} // namespace

double type_two_log_theta0(double alpha) {
  auto den = [alpha](double th) { return type_two_log_parts(alpha, Angles(th)).den; };
  return bisect_root(den, 1e-12, kPi - 1e-12, 1e-15);
}

SolutionSpec::SolutionSpec(SolutionVariant v) : v_(std::move(v)) {
  DomainDescriptor &d = domain_;
  std::visit(
      Overloaded{
          [&](const family::Landau &f) {
            require(finite(f.sigma) && f.sigma < 1.0, "Landau: sigma must be finite and < 1");
          },
          [&](const family::NoSwirlOneSing &f) {
            require(finite(f.tau) && finite(f.sigma), "NoSwirlOneSing: non-finite parameter");
            const bool low = f.tau <= 2.0 + 1e-12 && f.sigma <= (4.0 - f.tau) / 4.0;
            const bool high = f.tau >= 2.0 - 1e-12 && std::abs(f.sigma - f.tau / 4.0) <= 1e-12;
            require(low || high, "NoSwirlOneSing: (tau, sigma) outside the admissible region");
            const double tau_eff = one_sing_effective_tau(f);
            if (tau_eff != 0.0) add_pole(d, kSouthPole);
            // Fix the pressure constant from the reduced equation at y = -1 and y = 0.
            const double c1 = 0.25 * tau_eff * tau_eff - tau_eff;
            const Profile mid = one_sing_profile(f, Angles(0.5 * kPi));
            c3_ = mid.dU + 0.5 * mid.U * mid.U - c1;
          },
          [&](const family::TypeTwoLog &f) {
            require(finite(f.alpha), "TypeTwoLog: alpha must be finite");
            d.theta_min = type_two_log_theta0(f.alpha);
            add_pole(d, kSouthPole);
            c3_ = -4.0;
          },
          [&](const family::EllipticC3Half &f) {
            require(f.infinite || finite(f.alpha), "EllipticC3Half: alpha must be finite or infinite");
            c3_ = 0.5;
            add_pole(d, kNorthPole);
            if (!f.infinite && f.alpha < 0.0) {
              d.theta_max = elliptic_root(f);
            } else {
              add_pole(d, kSouthPole);
            }
          },
          [&](const family::PowerLiouville &f) {
            require(finite(f.alpha) && f.alpha != 0.0, "PowerLiouville: alpha must be nonzero");
            require(finite(f.a_abs) && f.a_abs > 0.0, "PowerLiouville: |a| must be positive");
            if (std::abs(f.alpha) != 1.0) {
              add_pole(d, kNorthPole);
              add_pole(d, kSouthPole);
            }
          },
          [&](const family::ExpLiouville &f) {
            require(finite(f.a_abs) && f.a_abs > 0.0, "ExpLiouville: |a| must be positive");
            require(finite(f.b1) && finite(f.b2) && std::hypot(f.b1, f.b2) > 0.0,
                    "ExpLiouville: b must be nonzero");
            add_pole(d, kNorthPole);
          },
          [&](const family::ExpPowerLiouville &f) {
            require(f.k >= 1, "ExpPowerLiouville: k must be a positive integer");
            add_pole(d, kNorthPole);
            if (f.k >= 2) add_pole(d, kSouthPole);
          },
          [&](const family::LimitPole &f) {
            require(f.sign == 1 || f.sign == -1, "LimitPole: sign must be +1 or -1");
            add_pole(d, f.sign > 0 ? kNorthPole : kSouthPole);
          },
          [&](const family::EulerNoSwirl &f) {
            require(finite(f.c0) && finite(f.c1) && finite(f.c2), "EulerNoSwirl: non-finite coefficient");
            require(f.sign == 1 || f.sign == -1, "EulerNoSwirl: sign must be +1 or -1");
            double qmin = std::min(f.c0 + f.c1 + f.c2, f.c0 - f.c1 + f.c2);
            if (f.c2 > 0.0) {
              const double yv = -f.c1 / (2.0 * f.c2);
              if (std::abs(yv) < 1.0) qmin = std::min(qmin, f.c0 - f.c1 * f.c1 / (4.0 * f.c2));
            }
            require(qmin >= 0.0, "EulerNoSwirl: c0 + c1 y + c2 y^2 is negative on [-1, 1]");
            add_pole(d, kNorthPole);
            add_pole(d, kSouthPole);
          },
          [&](const family::EulerNS &f) {
            require(finite(f.a) && finite(f.b), "EulerNS: non-finite coefficient");
            if (f.a + f.b != 0.0) add_pole(d, kNorthPole);
            if (f.b - f.a != 0.0) add_pole(d, kSouthPole);
          },
          [&](const family::SpecialGlobalC3m4 &) {
            add_pole(d, kNorthPole);
            add_pole(d, kSouthPole);
            c3_ = -4.0;
          },
          [&](const family::WithConstantSwirl &f) {
            require(f.base != nullptr, "WithConstantSwirl: missing base");
            require(finite(f.swirl), "WithConstantSwirl: C must be finite");
            require(f.base->axisymmetric() && f.base->no_swirl(),
                    "WithConstantSwirl: base must be axisymmetric without swirl");
            d = f.base->domain();
            c3_ = f.base->c3();
            if (f.swirl != 0.0) {
              add_pole(d, kNorthPole);
              add_pole(d, kSouthPole);
            }
          },
      },
      v_);
}

std::string SolutionSpec::tag() const {
  return std::visit(Overloaded{
                        [](const family::Landau &) { return std::string("landau"); },
                        [](const family::NoSwirlOneSing &) { return std::string("no_swirl_one_sing"); },
                        [](const family::TypeTwoLog &) { return std::string("type_two_log"); },
                        [](const family::EllipticC3Half &) { return std::string("elliptic_c3_half"); },
                        [](const family::PowerLiouville &) { return std::string("power_liouville"); },
                        [](const family::ExpLiouville &) { return std::string("exp_liouville"); },
                        [](const family::ExpPowerLiouville &) { return std::string("exp_power_liouville"); },
                        [](const family::LimitPole &) { return std::string("limit_pole"); },
                        [](const family::EulerNoSwirl &) { return std::string("euler_no_swirl"); },
                        [](const family::EulerNS &) { return std::string("euler_ns"); },
                        [](const family::SpecialGlobalC3m4 &) { return std::string("special_global_c3m4"); },
                        [](const family::WithConstantSwirl &) { return std::string("with_constant_swirl"); },
                    },
                    v_);
}

bool SolutionSpec::axisymmetric() const {
  return !std::holds_alternative<family::ExpLiouville>(v_) &&
         !std::holds_alternative<family::ExpPowerLiouville>(v_);
}

bool SolutionSpec::no_swirl() const {
  if (const auto *w = std::get_if<family::WithConstantSwirl>(&v_)) return w->swirl == 0.0;
  return axisymmetric();
}

bool SolutionSpec::navier_stokes() const {
  if (const auto *w = std::get_if<family::WithConstantSwirl>(&v_)) return w->base->navier_stokes();
  return !std::holds_alternative<family::EulerNoSwirl>(v_);
}

namespace {

FieldSample eval_variant(const SolutionSpec &spec, double theta, double phi) {
  const Angles a(theta);
  return std::visit(
      Overloaded{
          [&](const family::Landau &f) { return from_profile(landau_profile(f.sigma, a), a, 0.0); },
          [&](const family::NoSwirlOneSing &f) {
            return from_profile(one_sing_profile(f, a), a, spec.c3());
          },
          [&](const family::TypeTwoLog &f) { return type_two_log_sample(f.alpha, a); },
          [&](const family::EllipticC3Half &f) { return elliptic_sample(f, a); },
          [&](const family::PowerLiouville &f) { return power_liouville_sample(f, a); },
          [&](const family::ExpLiouville &f) { return exp_liouville_sample(f, a, phi); },
          [&](const family::ExpPowerLiouville &f) { return exp_power_sample(f, a, phi); },
          [&](const family::LimitPole &f) { return limit_pole_sample(f.sign, a); },
          [&](const family::EulerNoSwirl &f) { return euler_no_swirl_sample(f, a); },
          [&](const family::EulerNS &f) { return euler_ns_sample(f.a, f.b, a); },
          [&](const family::SpecialGlobalC3m4 &) { return euler_ns_sample(-4.0, 0.0, a); },
          [&](const family::WithConstantSwirl &f) {
            FieldSample s = evaluate(*f.base, theta, phi);
            s.u_phi += f.swirl / a.sin;
            s.p -= f.swirl * f.swirl / (2.0 * a.sin * a.sin);
            return s;
          },
      },
      spec.variant());
}

} // namespace

FieldSample evaluate(const SolutionSpec &spec, double theta, double phi) {
  if (!(theta > 0.0 && theta < kPi) || !spec.domain().contains(theta) || !std::isfinite(phi)) {
    throw DomainError("evaluate: point outside the solution's domain");
  }
  return eval_variant(spec, theta, phi);
}

const DomainDescriptor &domain_of(const SolutionSpec &spec) { return spec.domain(); }

SphereField as_field(const SolutionSpec &spec) {
  return [spec](double theta, double phi) { return evaluate(spec, theta, phi); };
}

SolutionSpec special_global_c3m4() { return SolutionSpec(family::SpecialGlobalC3m4{}); }

double pressure_from_velocity(const SphereField &u, double theta, double phi, double h, bool viscous) {
  if (!(theta - 3.0 * h > 0.0 && theta + 3.0 * h < kPi)) {
    throw StencilContamination("pressure_from_velocity: stencil crosses a pole");
  }
  static constexpr double w1[7] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};
  static constexpr double w2[7] = {2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0};
  const double st = std::sin(theta);
  const double hp = h / st; // comparable arc length in phi
  double dt = 0, dtt = 0, dp = 0, dpp = 0;
  for (int k = -3; k <= 3; ++k) {
    const double ut = u(theta + k * h, phi).u_r;
    const double up = u(theta, phi + k * hp).u_r;
    dt += w1[k + 3] * ut;
    dtt += w2[k + 3] * ut;
    dp += w1[k + 3] * up;
    dpp += w2[k + 3] * up;
  }
  dt /= 60.0 * h;
  dtt /= 180.0 * h * h;
  dp /= 60.0 * hp;
  dpp /= 180.0 * hp * hp;
  const FieldSample c = u(theta, phi);
  const double lap = dtt + std::cos(theta) / st * dt + dpp / (st * st);
  const double adv = c.u_theta * dt + c.u_phi / st * dp;
  const double sq = c.u_r * c.u_r + c.u_theta * c.u_theta + c.u_phi * c.u_phi;
  return -0.5 * ((viscous ? lap : 0.0) - adv + sq);
}

bool is_landau(const SolutionSpec &spec) {
  return std::visit(Overloaded{
                        [](const family::Landau &) { return true; },
                        [](const family::NoSwirlOneSing &f) { return one_sing_effective_tau(f) == 0.0; },
                        [](const family::PowerLiouville &f) { return std::abs(f.alpha) == 1.0; },
                        [](const family::EulerNS &f) { return f.a == 0.0 && f.b == 0.0; },
                        [](const family::WithConstantSwirl &f) { return f.swirl == 0.0 && is_landau(*f.base); },
                        [](const auto &) { return false; },
                    },
                    spec.variant());
}

} // namespace hns
