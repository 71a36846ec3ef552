// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria (capped at 9), so ctest reports any failure.

#include "hns/analysis.hpp"
#include "hns/errors.hpp"
#include "hns/families.hpp"
#include "hns/liouville.hpp"
#include "hns/reduced_ode.hpp"
#include "hns/specfun.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace hns;
using namespace hns::family;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void note(Outcome &o, bool ok, const std::string &what) {
  if (!ok) {
    o.pass = false;
    o.detail += (o.detail.empty() ? "" : "; ") + what;
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Member {
  std::string name;
  SolutionSpec spec;
};

std::vector<Member> one_sing_samples() {
  // tau < 2, tau = 2 and tau > 2 (sigma = tau / 4)
  return {{"no_swirl_one_sing(-1,0.3)", SolutionSpec(NoSwirlOneSing{-1.0, 0.3})},
          {"no_swirl_one_sing(0.5,0.2)", SolutionSpec(NoSwirlOneSing{0.5, 0.2})},
          {"no_swirl_one_sing(1,-2)", SolutionSpec(NoSwirlOneSing{1.0, -2.0})},
          {"no_swirl_one_sing(2,0)", SolutionSpec(NoSwirlOneSing{2.0, 0.0})},
          {"no_swirl_one_sing(2,0.5)", SolutionSpec(NoSwirlOneSing{2.0, 0.5})},
          {"no_swirl_one_sing(4,1)", SolutionSpec(NoSwirlOneSing{4.0, 1.0})}};
}

std::vector<Member> ns_catalog() {
  std::vector<Member> m{{"landau(0.5)", SolutionSpec(Landau{0.5})}};
  for (auto &s : one_sing_samples()) m.push_back(s);
  m.push_back({"type_two_log(0)", SolutionSpec(TypeTwoLog{0.0})});
  m.push_back({"elliptic_c3_half(1)", SolutionSpec(EllipticC3Half{1.0})});
  m.push_back({"power_liouville(2)", SolutionSpec(PowerLiouville{2.0, 1.0})});
  m.push_back({"power_liouville(-3)", SolutionSpec(PowerLiouville{-3.0, 1.0})});
  m.push_back({"exp_liouville(1,1,0)", SolutionSpec(ExpLiouville{1.0, 1.0, 0.0})});
  m.push_back({"exp_power_liouville(2)", SolutionSpec(ExpPowerLiouville{2})});
  m.push_back({"limit_pole(+1)", SolutionSpec(LimitPole{1})});
  m.push_back({"limit_pole(-1)", SolutionSpec(LimitPole{-1})});
  m.push_back({"euler_ns(1,1)", SolutionSpec(EulerNS{1.0, 1.0})});
  m.push_back({"special_global_c3m4", special_global_c3m4()});
  return m;
}

std::vector<Member> axisymmetric_catalog() {
  std::vector<Member> out{{"landau(-1)", SolutionSpec(Landau{-1.0})}};
  for (auto &m : ns_catalog())
    if (m.spec.axisymmetric()) out.push_back(m);
  return out;
}

// Poles reachable from the member's domain.
std::vector<std::pair<std::string, Vec3>> poles_of(const SolutionSpec &s) {
  const DomainDescriptor &d = domain_of(s);
  std::vector<std::pair<std::string, Vec3>> out;
  if (d.theta_min == 0.0) out.push_back({"N", kNorthPole});
  if (d.theta_max == kPi) out.push_back({"S", kSouthPole});
  return out;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  GridSpec g;
  g.n_theta = 24;
  g.n_phi = 12;
  g.radii = {1.0};
  g.step = 2e-2;
  g.max_speed = 50.0;
  double worst_m = 0.0, worst_d = 0.0;
  int fewest = 1 << 30;
  for (const Member &m : ns_catalog()) {
    try {
      const ResidualReport r = ns_residual(m.spec, g);
      worst_m = std::max(worst_m, r.max_momentum);
      worst_d = std::max(worst_d, r.max_divergence);
      fewest = std::min(fewest, r.n_points);
      note(o, r.max_momentum < 1e-5 && r.max_divergence < 1e-6 && r.n_points >= 200,
           fmt("%s momentum %.2e divergence %.2e points %d", m.name.c_str(), r.max_momentum, r.max_divergence,
               r.n_points));
    } catch (const Error &e) {
      note(o, false, m.name + ": " + e.what());
    }
  }
  const double t = seconds_since(t0);
  note(o, t < 60.0, fmt("runtime %.1f s", t));
  if (o.pass) o.detail = fmt("max momentum %.2e, max divergence %.2e, >= %d points each, %.1f s", worst_m, worst_d, fewest, t);
  return o;
}

Outcome criterion2() {
  Outcome o;
  GridSpec g;
  g.n_theta = 24;
  g.n_phi = 12;
  const SolutionSpec e(EulerNoSwirl{1.0, 0.0, 1.0, 1});
  const SolutionSpec b(EulerNS{1.0, 1.0});
  const ResidualReport ee = euler_residual(e, g), en = ns_residual(e, g);
  const ResidualReport be = euler_residual(b, g), bn = ns_residual(b, g);
  note(o, ee.max_momentum < 1e-6, fmt("euler_no_swirl Euler residual %.2e", ee.max_momentum));
  note(o, en.max_momentum > 0.1, fmt("euler_no_swirl NS residual only %.2e", en.max_momentum));
  note(o, be.max_momentum < 1e-6, fmt("euler_ns Euler residual %.2e", be.max_momentum));
  note(o, bn.max_momentum < 1e-5 && bn.max_divergence < 1e-6, fmt("euler_ns NS residual %.2e", bn.max_momentum));
  if (o.pass)
    o.detail = fmt("EulerNoSwirl Euler %.1e / NS %.2f; EulerNS Euler %.1e / NS %.1e", ee.max_momentum, en.max_momentum,
                   be.max_momentum, bn.max_momentum);
  return o;
}

Outcome criterion3() {
  Outcome o;
  const std::pair<double, double> taus[] = {{-1.0, 0.3}, {0.5, 0.2}, {2.0, 0.0}, {4.0, 1.0}};
  for (auto [tau, sigma] : taus) {
    const FieldSource src = source_of(SolutionSpec(NoSwirlOneSing{tau, sigma}));
    const double t = extract_tau(src, kSouthPole).value;
    note(o, std::abs(t - tau) < 1e-3, fmt("tau %.3g estimated as %.6f", tau, t));
  }
  std::string kappas;
  for (const Member &m : {Member{"type_two_log(0)", SolutionSpec(TypeTwoLog{0.0})},
                          Member{"special_global_c3m4", special_global_c3m4()}}) {
    const double k = extract_log_slope(source_of(m.spec), kSouthPole).kappa;
    note(o, std::abs(k - 8.0) <= 0.02 * 8.0, fmt("%s kappa %.6g (expected 8)", m.name.c_str(), k));
    kappas += fmt(" %s kappa %.4g", m.name.c_str(), k);
  }
  // the u_r saturation belongs to the eta = 2 members; sigma = 1/2 has eta = 0
  int saturated = 0;
  for (double sigma : {0.0, 0.5, -1.0}) {
    const FieldSource src = source_of(SolutionSpec(NoSwirlOneSing{2.0, sigma}));
    const auto eta = snap_eta(extract_eta(src, kSouthPole).value);
    note(o, eta.has_value(), fmt("eta for (2,%.1f) not in {0,2}", sigma));
    if (eta && *eta == 2.0) {
      ++saturated;
      const double sat = growth_bound(src, kSouthPole).saturation;
      note(o, std::abs(sat + 2.0) <= 0.05 * 2.0, fmt("d^2 ln^2 d u_r for (2,%.1f) tends to %.4f", sigma, sat));
    }
  }
  note(o, saturated > 0, "no tau = 2 member with eta = 2");
  if (o.pass) o.detail = "tau, eta and saturation within tolerance;" + kappas;
  return o;
}

bool same_type(SingularityType a, GradientType b) {
  switch (a) {
  case SingularityType::Type1:
  case SingularityType::Removable: return b == GradientType::Type1p;
  case SingularityType::Type2: return b == GradientType::Type2p;
  case SingularityType::Type3: return b == GradientType::Type3p;
  default: return false;
  }
}

Outcome criterion4() {
  Outcome o;
  int checked = 0;
  for (const Member &m : axisymmetric_catalog()) {
    const FieldSource src = source_of(m.spec);
    bool removable = true;
    for (const auto &[name, P] : poles_of(m.spec)) {
      try {
        const SingularityReport r = classify(src, P);
        const GradientReport gr = gradient_classify(src, P);
        ++checked;
        note(o, same_type(r.type, gr.type),
             fmt("%s at %s: %s vs %s", m.name.c_str(), name.c_str(), to_string(r.type).c_str(),
                 to_string(gr.type).c_str()));
        if (std::holds_alternative<NoSwirlOneSing>(m.spec.variant()))
          note(o, r.type != SingularityType::Type2, m.name + " classified Type2");
        removable = removable && (r.type == SingularityType::Removable || r.type == SingularityType::Type1);
      } catch (const Error &e) {
        note(o, false, m.name + " at " + name + ": " + e.what());
        removable = false;
      }
    }
    const bool landau = std::holds_alternative<Landau>(m.spec.variant());
    note(o, removable == landau, m.name + (landau ? " not removable" : " removable"));
  }
  if (o.pass) o.detail = fmt("%d pole classifications agree; removable exactly for Landau", checked);
  return o;
}

Outcome criterion5() {
  Outcome o;
  double worst = 0.0;
  for (double lambda : {1.0, 2.0, 5.0, -2.0}) {
    const Trajectory t = integrate_noswirl(0, 0, 0, 2.0 / lambda, -0.9, 0.9);
    for (int i = 0; i <= 180; ++i) {
      const double y = -0.9 + 0.01 * i;
      worst = std::max(worst, std::abs(t.state(y).U_theta - 2.0 * (1 - y * y) / (lambda + y)));
    }
  }
  note(o, worst < 1e-8, fmt("closed-form deviation %.2e", worst));
  const RegionProbe r = estimate_gamma_bounds(0, 0, 0);
  note(o, std::abs(r.gamma_minus_hat + 2) <= 0.05 && std::abs(r.gamma_plus_hat - 2) <= 0.05,
       fmt("gamma bounds (%.4f, %.4f)", r.gamma_minus_hat, r.gamma_plus_hat));
  const NoSwirlField f = reconstruct_noswirl_field(integrate_noswirl(0, 0, -4, 0.0, -1 + 1e-6, 1 - 1e-6), -4.0);
  const SolutionSpec special = special_global_c3m4();
  double dev = 0.0;
  for (int i = 1; i < 60; ++i) {
    const double th = kPi * i / 60.0;
    const FieldSample a = f.field(th, 0.0), b = evaluate(special, th, 0.0);
    dev = std::max({dev, std::abs(a.u_r - b.u_r), std::abs(a.u_theta - b.u_theta), std::abs(a.p - b.p)});
  }
  note(o, dev < 1e-8, fmt("reconstruction deviation %.2e", dev));
  if (o.pass)
    o.detail = fmt("closed form %.1e, gamma (%.4f, %.4f), reconstruction %.1e", worst, r.gamma_minus_hat,
                   r.gamma_plus_hat, dev);
  return o;
}

Vec3 catalog_velocity(const SolutionSpec &s, double th, double ph) {
  const FieldSample f = evaluate(s, th, ph);
  const Frame b = basis_vectors(th, ph);
  return f.u_r * b.e_r + f.u_theta * b.e_theta + f.u_phi * b.e_phi;
}

Outcome criterion6() {
  Outcome o;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> th(0.05, kPi - 0.05), ph(0.0, 2 * kPi);
  double worst = 0.0, defect = 0.0;
  for (double alpha : {2.0, 3.0, -2.0}) {
    const auto s = LiouvilleSolution::closed_form(generator::Power{alpha});
    const SolutionSpec c(PowerLiouville{alpha, 1.0});
    for (int i = 0; i < 100; ++i) {
      const double t = th(rng), p = ph(rng);
      const Vec3 b = catalog_velocity(c, t, p);
      worst = std::max(worst, norm(s.velocity(spherical_to_cartesian({1, t, p})) - b) / std::max(1.0, norm(b)));
      if (i % 10 == 0) defect = std::max(defect, std::abs(liouville_defect(s, t, p)));
    }
  }
  note(o, worst < 1e-8, fmt("power generator deviation %.2e", worst));
  const auto id = LiouvilleSolution::closed_form(generator::Power{1.0});
  double zero = 0.0;
  for (int i = 0; i < 100; ++i) zero = std::max(zero, norm(id.velocity(spherical_to_cartesian({1, th(rng), ph(rng)}))));
  note(o, zero < 1e-10, fmt("f = z gives |u| = %.2e", zero));
  const auto ex = LiouvilleSolution::closed_form(generator::Exp{});
  const SolutionSpec ce(ExpLiouville{1.0, 1.0, 0.0});
  double wexp = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = th(rng), p = ph(rng);
    const Vec3 b = catalog_velocity(ce, t, p);
    wexp = std::max(wexp, norm(ex.velocity(spherical_to_cartesian({1, t, p})) - b) / std::max(1.0, norm(b)));
    if (i % 10 == 0) defect = std::max(defect, std::abs(liouville_defect(ex, t, p)));
  }
  note(o, wexp < 1e-8, fmt("exp generator deviation %.2e", wexp));
  note(o, defect < 1e-4, fmt("Liouville defect %.2e", defect));
  if (o.pass) o.detail = fmt("power %.1e, f=z %.1e, exp %.1e, defect %.1e", worst, zero, wexp, defect);
  return o;
}

Vec3 random_unit(std::mt19937 &rng) {
  std::normal_distribution<double> n;
  return normalized(Vec3{n(rng), n(rng), n(rng)});
}

std::vector<Vec3> random_points(std::mt19937 &rng, int m) {
  for (;;) {
    std::vector<Vec3> p;
    for (int i = 0; i < m; ++i) p.push_back(random_unit(rng));
    bool spread = true;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) spread = spread && norm(p[i] - p[j]) > 0.5;
    if (spread) return p;
  }
}

Outcome criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  std::mt19937 rng(31);
  double worst_slope = 0.0, worst_shift = 0.0, worst_res = 0.0;
  const std::vector<std::vector<int>> cases{{2, -2}, {2, 2, -3}};
  for (const auto &ls : cases) {
    SingularityPrescription p;
    p.points = random_points(rng, static_cast<int>(ls.size()));
    p.exponents = ls;
    const auto s = LiouvilleSolution::build(p);
    const auto fits = verify_asymptotics(s);
    p.basepoint = Complex(-0.7, 1.3);
    const auto moved = verify_asymptotics(LiouvilleSolution::build(p));
    for (std::size_t j = 0; j < fits.size(); ++j) {
      const double rel = std::abs(fits[j].slope - fits[j].expected) / fits[j].expected;
      const double shift = std::abs(moved[j].slope - fits[j].slope) / fits[j].expected;
      worst_slope = std::max(worst_slope, rel);
      worst_shift = std::max(worst_shift, shift);
      note(o, fits[j].ok && rel <= 0.03,
           fmt("m=%zu point %zu slope %.4f expected %.0f", ls.size(), j, fits[j].slope, fits[j].expected));
      note(o, moved[j].ok && shift <= 0.03, fmt("m=%zu point %zu basepoint shift %.2e", ls.size(), j, shift));
    }
    GridSpec g;
    g.n_theta = 16;
    g.n_phi = 12;
    g.margin = 0.1;
    const ResidualReport r = ns_residual(FieldSource{s.as_field(), s.domain()}, g);
    worst_res = std::max(worst_res, r.max_momentum);
    note(o, r.max_momentum < 1e-4 && r.n_points > 0, fmt("m=%zu NS residual %.2e", ls.size(), r.max_momentum));
  }
  const double t = seconds_since(t0);
  note(o, t < 120.0, fmt("runtime %.1f s", t));
  if (o.pass)
    o.detail = fmt("slopes within %.2f%%, basepoint shift %.2e, NS residual %.1e, %.1f s", 100 * worst_slope,
                   worst_shift, worst_res, t);
  return o;
}

Outcome criterion8() {
  Outcome o;
  using boost::math::quadrature::gauss_kronrod;
  note(o, std::abs(elliptic_K(0.0) - kPi / 2) <= 1e-14, "K(0)");
  note(o, std::abs(elliptic_E(1.0) - 1.0) <= 1e-14, "E(1)");
  double agm = 0.0, legendre = 0.0;
  for (double m : {0.01, 0.2, 0.5, 0.8, 0.95, 0.999}) {
    auto fk = [m](double t) { return 1.0 / std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); };
    auto fe = [m](double t) { return std::sqrt(1.0 - m * std::sin(t) * std::sin(t)); };
    agm = std::max(agm, std::abs(elliptic_K(m) - gauss_kronrod<double, 61>::integrate(fk, 0.0, kPi / 2, 15, 1e-15)));
    agm = std::max(agm, std::abs(elliptic_E(m) - gauss_kronrod<double, 61>::integrate(fe, 0.0, kPi / 2, 15, 1e-15)));
    const double K = elliptic_K(m), E = elliptic_E(m), Kc = elliptic_K(1 - m), Ec = elliptic_E(1 - m);
    legendre = std::max(legendre, std::abs(E * Kc + Ec * K - K * Kc - kPi / 2));
  }
  note(o, agm <= 1e-11, fmt("AGM vs quadrature %.2e", agm));
  note(o, legendre <= 1e-10, fmt("Legendre relation %.2e", legendre));
  std::vector<double> grid;
  for (int i = -90; i <= 90; ++i) grid.push_back(0.01 * i);
  const ChiSolution chi = chi_solve(-4.0, 0.0, {0.0, 4.0}, grid);
  double dchi = 0.0;
  for (double y : grid) {
    const double closed = (1 - y * y) * std::log((1 + y) / (1 - y)) + 2 * y;
    dchi = std::max(dchi, std::abs(chi(y).first - closed));
  }
  note(o, dchi <= 1e-8, fmt("chi deviation %.2e", dchi));
  if (o.pass) o.detail = fmt("AGM %.1e, Legendre %.1e, chi %.1e", agm, legendre, dchi);
  return o;
}

Outcome criterion9() {
  Outcome o;
  int checked = 0;
  double worst_trend = 0.0;
  for (const Member &m : axisymmetric_catalog()) {
    const FieldSource src = source_of(m.spec);
    for (const auto &[name, P] : poles_of(m.spec)) {
      try {
        const GrowthBound b = growth_bound(src, P);
        ++checked;
        worst_trend = std::max(worst_trend, b.trend);
        note(o, std::isfinite(b.K) && b.trend < 1.5,
             fmt("%s at %s: K %.3g trend %.3g", m.name.c_str(), name.c_str(), b.K, b.trend));
      } catch (const Error &e) {
        note(o, false, m.name + " at " + name + ": " + e.what());
      }
    }
  }
  if (o.pass) o.detail = fmt("%d poles, envelope holds with worst trend %.3f", checked, worst_trend);
  return o;
}

} // namespace

int main() {
  const std::function<Outcome()> criteria[] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                               criterion6, criterion7, criterion8, criterion9};
  int failed = 0;
  for (int i = 0; i < 9; ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %d: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed;
}
