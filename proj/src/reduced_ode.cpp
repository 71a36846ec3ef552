#include "hns/reduced_ode.hpp"

#include "hns/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hns {

ReducedConstants ReducedConstants::from_c(double c1, double c2, double c3, double y0) {
  ReducedConstants k;
  k.b1 = -c3;
  k.b2 = c2 - c1;
  k.b3 = c1 + c2 + c3;
  k.y0 = y0;
  return k;
}

double bar_c3(double c1, double c2) {
  if (!(c1 >= -1.0) || !(c2 >= -1.0)) throw InvalidArgument("bar_c3: c1 and c2 must be >= -1");
  const double s = std::sqrt(1.0 + c1) + std::sqrt(1.0 + c2);
  return -0.5 * s * (s + 2.0);
}

bool in_J(double c1, double c2, double c3) {
  if (!(c1 >= -1.0) || !(c2 >= -1.0) || !std::isfinite(c3)) return false;
  return c3 >= bar_c3(c1, c2);
}

namespace {

using S6 = ode::State<6>;

// State layout: U_theta, U_phi, U_phi', T, T', T''.
S6 reduced_rhs(const ReducedConstants &k, double y, const S6 &s) {
  const double w = 1.0 - y * y;
  S6 d;
  d[0] = (k.rhs(y) - s[3] - 2.0 * y * s[0] - 0.5 * s[0] * s[0]) / w;
  d[1] = s[2];
  d[2] = -s[0] * s[2] / w;
  d[3] = s[4];
  d[4] = s[5];
  d[5] = 2.0 * s[1] * s[2] / w;
  return d;
}

ReducedState to_state(double y, const S6 &s) { return {y, s[0], s[1], s[2], s[3], s[4], s[5]}; }

} // namespace

Trajectory::Trajectory(Dense dense, ReducedConstants consts, bool no_swirl, std::optional<double> escape_lo,
                       std::optional<double> escape_hi)
    : dense_(std::move(dense)), consts_(consts), no_swirl_(no_swirl), escape_lo_(escape_lo),
      escape_hi_(escape_hi) {}

ReducedState Trajectory::state(double y) const { return to_state(y, dense_.value(y)); }

double Trajectory::dU_theta(double y) const { return reduced_rhs(consts_, y, dense_.value(y))[0]; }

double Trajectory::invariant_defect(double y) const {
  const S6 s = dense_.value(y);
  const double dU = dense_.derivative(y)[0];
  return std::abs((1.0 - y * y) * dU + 2.0 * y * s[0] + 0.5 * s[0] * s[0] + s[3] - consts_.rhs(y));
}

double Trajectory::max_invariant_defect(int n) const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = y_min() + (y_max() - y_min()) * i / (n - 1.0);
    worst = std::max(worst, invariant_defect(y));
  }
  return worst;
}

bool Trajectory::swirl_monotone(int n) const {
  int sign = 0;
  for (int i = 0; i < n; ++i) {
    const double y = y_min() + (y_max() - y_min()) * i / (n - 1.0);
    const double d = dense_.value(y)[2];
    if (std::abs(d) <= 1e-12) continue;
    const int s = d > 0 ? 1 : -1;
    if (sign != 0 && s != sign) return false;
    sign = s;
  }
  return true;
}

Trajectory integrate_reduced(const ReducedState &init, const ReducedConstants &consts, double y_lo, double y_hi,
                             double blowup, double rtol) {
  const double lim = 1.0 - 1e-6;
  if (!(y_lo >= -lim && y_lo <= init.y && init.y <= y_hi && y_hi <= lim))
    throw InvalidArgument("integrate_reduced: need -1+1e-6 <= y_lo <= anchor <= y_hi <= 1-1e-6");
  if (init.T != 0.0 || init.T1 != 0.0 || init.T2 != 0.0)
    throw InvalidArgument("integrate_reduced: swirl integrals must vanish at the anchor");
  if (std::abs(init.y - consts.y0) > 1e-15)
    throw InvalidArgument("integrate_reduced: anchor differs from the constants' y0");
  const S6 y0{init.U_theta, init.U_phi, init.U_phi_prime, 0.0, 0.0, 0.0};
  const auto rhs = [&](double y, const S6 &s) { return reduced_rhs(consts, y, s); };
  const auto stop = [&](double, const S6 &s) { return !(std::abs(s[0]) <= blowup); };
  ode::Options opt;
  opt.rtol = rtol;
  opt.atol = opt.rtol * 1e-2;

  Trajectory::Dense dense;
  std::optional<double> esc_lo, esc_hi;
  for (double target : {y_hi, y_lo}) {
    if (target == init.y) continue;
    const auto res = ode::integrate<6>(rhs, init.y, y0, target, opt, stop);
    // A stalled step size only happens next to a pole of U, so it counts as escape too.
    if (res.status != ode::Status::Completed) (target > init.y ? esc_hi : esc_lo) = res.t_reached;
    dense.append(res.steps);
  }
  if (dense.empty()) throw InvalidArgument("integrate_reduced: empty range");
  const bool no_swirl = init.U_phi == 0.0 && init.U_phi_prime == 0.0;
  Trajectory out(std::move(dense), consts, no_swirl, esc_lo, esc_hi);
  out.set_origin(init, blowup, rtol);
  return out;
}

Trajectory integrate_noswirl(double c1, double c2, double c3, double gamma, double y_lo, double y_hi,
                             double blowup, double rtol) {
  ReducedState init;
  init.y = 0.0;
  init.U_theta = gamma;
  return integrate_reduced(init, ReducedConstants::from_c(c1, c2, c3, 0.0), y_lo, y_hi, blowup, rtol);
}

EndpointLimits endpoint_limits(const Trajectory &t, double eps) {
  EndpointLimits out;
  auto side = [&](double sign, double &limit) {
    double f[5];
    for (int k = 0; k < 5; ++k) {
      const double y = sign * (1.0 - std::ldexp(eps, -k));
      if (y < t.y_min() || y > t.y_max()) return false;
      f[k] = t.state(y).U_theta;
    }
    const double r3 = 2.0 * f[3] - f[2], r4 = 2.0 * f[4] - f[3];
    limit = r4;
    return std::abs(r4 - r3) <= 0.05 * std::max(1.0, std::abs(r4));
  };
  const bool a = side(-1.0, out.at_minus);
  const bool b = side(1.0, out.at_plus);
  out.converged = a && b;
  return out;
}

namespace {

constexpr double kEdge = 1e-5;

bool admissible(double c1, double c2, double c3, double gamma) {
  const Trajectory t = integrate_noswirl(c1, c2, c3, gamma, -1.0 + kEdge, 1.0 - kEdge, 50.0);
  if (t.blew_up()) return false;
  return endpoint_limits(t, 16.0 * kEdge).converged;
}

// Shrinks [good, bad] to the requested width.
double bisect_edge(double c1, double c2, double c3, double good, double bad, double width, double &final_width) {
  while (std::abs(bad - good) > width) {
    const double mid = 0.5 * (good + bad);
    (admissible(c1, c2, c3, mid) ? good : bad) = mid;
  }
  final_width = std::max(final_width, std::abs(bad - good));
  return 0.5 * (good + bad);
}

} // namespace

RegionProbe estimate_gamma_bounds(double c1, double c2, double c3, double width) {
  if (!in_J(c1, c2, c3)) throw InvalidArgument("estimate_gamma_bounds: c is outside J");
  if (!(width > 0.0)) throw InvalidArgument("estimate_gamma_bounds: width must be positive");
  std::optional<double> seed;
  for (int i = 0; i <= 400 && !seed; ++i) {
    const double g = (i % 2 ? 1.0 : -1.0) * 0.05 * ((i + 1) / 2);
    if (admissible(c1, c2, c3, g)) seed = g;
  }
  if (!seed) throw Inconclusive("estimate_gamma_bounds: no admissible U_theta(0) in [-10, 10]");

  RegionProbe out{c1, c2, c3, *seed, *seed, 0.0};
  for (double dir : {1.0, -1.0}) {
    double step = 0.05, bad = *seed + dir * step;
    while (admissible(c1, c2, c3, bad)) {
      step *= 2.0;
      bad = *seed + dir * step;
      if (step > 1e6) throw Inconclusive("estimate_gamma_bounds: admissible interval looks unbounded");
    }
    double good = *seed;
    // Tighten the initial bracket with the last admissible point of the expansion.
    if (step > 0.05) good = *seed + dir * step / 2.0;
    const double edge = bisect_edge(c1, c2, c3, good, bad, width, out.bracket_width);
    (dir > 0 ? out.gamma_plus_hat : out.gamma_minus_hat) = edge;
  }
  if (out.gamma_minus_hat > out.gamma_plus_hat) std::swap(out.gamma_minus_hat, out.gamma_plus_hat);
  return out;
}

NoSwirlField reconstruct_noswirl_field(const Trajectory &t, double c3) {
  if (!t.no_swirl()) throw InvalidArgument("reconstruct_noswirl_field: trajectory carries swirl");
  // Finite differences of the field see the kinks between dense-output
  // steps, so the trajectory is recomputed at a much tighter tolerance.
  const double fine = 1e-13;
  auto tr = std::make_shared<const Trajectory>(
      t.rtol() <= fine ? t
                       : integrate_reduced(t.origin(), t.constants(), t.y_min(), t.y_max(), t.blowup_bound(), fine));
  NoSwirlField out;
  out.domain.theta_min = std::acos(std::min(1.0, tr->y_max()));
  out.domain.theta_max = std::acos(std::max(-1.0, tr->y_min()));
  const DomainDescriptor dom = out.domain;
  out.field = [tr, c3, dom](double theta, double) {
    if (!dom.contains(theta)) throw DomainError("reconstructed field evaluated outside its trajectory");
    const double y = std::cos(theta), s = std::sin(theta);
    const double U = tr->state(y).U_theta;
    FieldSample f;
    f.u_theta = U / s;
    f.u_r = tr->dU_theta(y);
    f.u_phi = 0.0;
    f.p = f.u_r - 0.5 * f.u_theta * f.u_theta + c3;
    return f;
  };
  return out;
}

ReducedProfile profile_of(const Trajectory &t) {
  auto tr = std::make_shared<const Trajectory>(t);
  ReducedProfile p;
  p.U_theta = [tr](double y) { return tr->state(y).U_theta; };
  p.u_r = [tr](double y) { return tr->dU_theta(y); };
  p.U_phi = [tr](double y) { return tr->state(y).U_phi; };
  p.y_lo = tr->y_min();
  p.y_hi = tr->y_max();
  return p;
}

double pressure_integral_check(const ReducedProfile &prof, const ReducedConstants &k, int n) {
  using boost::math::quadrature::gauss_kronrod;
  const double y0 = k.y0;
  const double uphi0 = prof.U_phi(y0);
  const double lo = prof.y_lo + 1e-3 * (prof.y_hi - prof.y_lo);
  const double hi = prof.y_hi - 1e-3 * (prof.y_hi - prof.y_lo);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = lo + (hi - lo) * i / (n - 1.0);
    double integral = 0.0;
    if (y != y0) {
      const auto kernel = [&](double s) {
        const double up = prof.U_phi(s), w = 1.0 - s * s;
        return up * up * (s - y) * (1.0 - s * y) / (w * w);
      };
      integral = gauss_kronrod<double, 31>::integrate(kernel, y0, y, 12, 1e-13);
    }
    const double U = prof.U_theta(y);
    const double boundary = (y - y0) * (y - y0) * uphi0 * uphi0 / (2.0 * (1.0 - y0 * y0));
    const double rhs = -2.0 * y * U - 0.5 * U * U + integral + k.rhs(y) + boundary;
    worst = std::max(worst, std::abs((1.0 - y * y) * prof.u_r(y) - rhs));
  }
  return worst;
}

void write_trajectory_csv(const Trajectory &t, std::ostream &os, int n) {
  if (n < 2) throw InvalidArgument("write_trajectory_csv: need at least 2 samples");
  os << "y,U_theta,U_phi,U_phi_prime\n";
  char buf[128];
  for (int i = 0; i < n; ++i) {
    const double y = ((n - 1.0 - i) * t.y_min() + i * t.y_max()) / (n - 1.0);
    const ReducedState s = t.state(y);
    std::snprintf(buf, sizeof buf, "%.16e,%.16e,%.16e,%.16e\n", y, s.U_theta, s.U_phi, s.U_phi_prime);
    os << buf;
  }
}

} // namespace hns
