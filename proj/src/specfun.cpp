#include "hns/specfun.hpp"

#include "hns/errors.hpp"
#include "hns/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hns {

EllipticPair elliptic_KE(double m, double m1) {
  if (!(m >= 0.0 && m1 >= 0.0 && std::abs(m + m1 - 1.0) < 1e-12))
    throw InvalidArgument("elliptic_KE: parameter outside [0, 1]");
  if (m1 == 0.0) return {std::numeric_limits<double>::infinity(), 1.0};
  // AGM with E = K (1 - sum_n 2^{n-1} c_n^2), c_0^2 = m.
  double a = 1.0, b = std::sqrt(m1);
  double sum = 0.5 * m, pow2 = 0.5;
  for (int it = 0; it < 64 && std::abs(a - b) > 4e-16 * a; ++it) {
    const double c = 0.5 * (a - b);
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
    pow2 *= 2.0;
    sum += pow2 * c * c;
  }
  const double K = kPi / (2.0 * a);
  return {K, K * (1.0 - sum)};
}

double elliptic_K(double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw InvalidArgument("elliptic_K: parameter outside [0, 1)");
  if (m == 1.0) throw NumericalFailure("elliptic_K diverges at m = 1");
  return elliptic_KE(m, 1.0 - m).K;
}

double elliptic_E(double m) {
  if (!(m >= 0.0 && m <= 1.0)) throw InvalidArgument("elliptic_E: parameter outside [0, 1]");
  return elliptic_KE(m, 1.0 - m).E;
}

std::pair<double, double> ChiSolution::operator()(double y) const {
  const auto s = dense_.value(y);
  return {s[0], s[1]};
}

double ChiSolution::residual(std::span<const double> grid) const {
  double worst = 0.0;
  for (double y : grid) {
    const auto v = dense_.value(y);
    const auto d = dense_.derivative(y);
    const double r = std::abs(2.0 * (1.0 - y * y) * d[1] - c3_ * v[0]) / (1.0 + std::abs(v[0]));
    worst = std::max(worst, r);
  }
  return worst;
}

ChiSolution chi_solve(double c3, double y0, std::pair<double, double> init,
                      std::span<const double> grid) {
  const double lim = 1.0 - kChiEndpointMargin;
  if (std::abs(y0) >= lim) throw InvalidArgument("chi_solve: anchor touches a singular endpoint");
  double lo = y0, hi = y0;
  for (double y : grid) {
    if (!(std::abs(y) < lim)) throw InvalidArgument("chi_solve: grid touches a singular endpoint");
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  auto rhs = [c3](double y, const ode::State<2> &s) -> ode::State<2> {
    return {s[1], c3 * s[0] / (2.0 * (1.0 - y * y))};
  };
  ode::Options opt;
  opt.rtol = 1e-12;
  opt.atol = 1e-14;
  ChiSolution out;
  out.c3_ = c3;
  const ode::State<2> s0{init.first, init.second};
  for (double end : {lo, hi}) {
    if (end == y0) continue;
    auto res = ode::integrate<2>(rhs, y0, s0, end, opt);
    if (res.status != ode::Status::Completed) throw NumericalFailure("chi_solve: integration failed");
    out.dense_.append(res.steps);
  }
  if (out.dense_.empty()) {
    // Degenerate grid {y0}: take one tiny step so the solution is queryable.
    auto res = ode::integrate<2>(rhs, y0, s0, y0 + 1e-9, opt);
    out.dense_.append(res.steps);
  }
  return out;
}

double u_theta_from_chi(const ChiSolution &chi, double y) {
  const auto [v, d] = chi(y);
  if (std::abs(v) < 1e-14 * (1.0 + std::abs(d))) {
    throw DomainError("u_theta_from_chi: chi vanishes (domain boundary)");
  }
  return 2.0 * (1.0 - y * y) * d / v;
}

} // namespace hns
