#include "hns/liouville.hpp"

#include "hns/analysis.hpp"
#include "hns/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

namespace hns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double angle_between(const Vec3 &a, const Vec3 &b) { return 2.0 * std::asin(std::min(1.0, 0.5 * norm(a - b))); }

double softplus(double L) { return L > 0 ? L + std::log1p(std::exp(-L)) : std::log1p(std::exp(L)); }

double logistic(double L) { return L >= 0 ? 1.0 / (1.0 + std::exp(-L)) : std::exp(L) / (1.0 + std::exp(L)); }

} // namespace

void SingularityPrescription::validate() const {
  const std::size_t m = points.size();
  if (m < 2) throw InvalidArgument("prescription: need at least two points");
  if (exponents.size() != m) throw InvalidArgument("prescription: one exponent per point");
  long sum = 0;
  for (int l : exponents) {
    if (l >= -1 && l <= 1) throw InvalidArgument("prescription: exponents must avoid -1, 0, 1");
    sum += l;
  }
  if (sum != static_cast<long>(m) - 2) throw InvalidArgument("prescription: exponents must sum to m - 2");
  for (const Vec3 &p : points)
    if (!(std::abs(norm(p) - 1.0) < 1e-9)) throw InvalidArgument("prescription: points must be unit vectors");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (!(angle_between(points[i], points[j]) > 1e-6)) throw InvalidArgument("prescription: points must be distinct");
  if (!std::isfinite(basepoint.real()) || !std::isfinite(basepoint.imag()))
    throw InvalidArgument("prescription: basepoint must be finite");
}

// ---------------------------------------------------------------------------
// PathIntegralF

PathIntegralF::PathIntegralF(std::vector<Complex> poles, std::vector<int> exponents, Complex basepoint)
    : poles_(std::move(poles)), exponents_(std::move(exponents)), base_(basepoint) {
  double dmin = kInf;
  for (std::size_t i = 0; i < poles_.size(); ++i)
    for (std::size_t j = i + 1; j < poles_.size(); ++j) dmin = std::min(dmin, std::abs(poles_[i] - poles_[j]));
  radius_ = std::isfinite(dmin) ? std::min(0.5, 0.45 * dmin) : 0.5;
  cell_ = 0.5 * radius_;
  for (std::size_t j = 0; j < poles_.size(); ++j)
    if (exponents_[j] < 0 && std::abs(base_ - poles_[j]) < 1e-8)
      throw InvalidArgument("basepoint coincides with a singular point");
}

Complex PathIntegralF::fprime(Complex z) const {
  Complex out{1.0, 0.0};
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const int e = exponents_[j] - 1;
    if (e < 0 && z == poles_[j]) throw DomainError("f' evaluated at a pole");
    out *= std::pow(z - poles_[j], e);
  }
  return out;
}

Complex PathIntegralF::log_derivative(Complex z) const {
  Complex out{0.0, 0.0};
  for (std::size_t j = 0; j < poles_.size(); ++j) {
    if (z == poles_[j]) throw DomainError("log derivative evaluated at a zero or pole of f'");
    out += static_cast<double>(exponents_[j] - 1) / (z - poles_[j]);
  }
  return out;
}

Complex PathIntegralF::segment(Complex p, Complex q) const {
  if (p == q) return 0.0;
  const Complex d = q - p;
  auto g = [&](double s) { return fprime(p + s * d) * d; };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 15, 1e-14);
}

Complex PathIntegralF::arc(Complex c, double r, double a0, double a1) const {
  if (a0 == a1) return 0.0;
  auto g = [&](double a) {
    const Complex e = std::polar(r, a);
    return fprime(c + e) * Complex(0.0, 1.0) * e;
  };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, a0, a1, 15, 1e-14);
}

Complex PathIntegralF::integrate(Complex p, Complex q) const {
  const double r = radius_;
  Complex total{0.0, 0.0};
  // Leave (and re-enter) pole disks radially.
  auto exit_point = [&](Complex z) -> Complex {
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      if (exponents_[j] > 0) continue;
      const Complex d = z - poles_[j];
      const double a = std::abs(d);
      if (a < r) {
        if (a == 0.0) throw DomainError("path endpoint at a singular point");
        return poles_[j] + d * (r / a);
      }
    }
    return z;
  };
  const Complex p1 = exit_point(p), q1 = exit_point(q);
  total += segment(p, p1);

  struct Crossing {
    double t_in, t_out;
    std::size_t j;
  };
  std::vector<Crossing> cross;
  const Complex d = q1 - p1;
  const double len2 = std::norm(d);
  if (len2 > 0.0) {
    for (std::size_t j = 0; j < poles_.size(); ++j) {
      if (exponents_[j] > 0) continue;
      const Complex w = poles_[j] - p1;
      const double t0 = (w.real() * d.real() + w.imag() * d.imag()) / len2;
      const double dist2 = std::norm(w - t0 * d);
      if (dist2 >= r * r * (1.0 - 1e-12)) continue;
      const double half = std::sqrt((r * r - dist2) / len2);
      const double tin = std::max(0.0, t0 - half), tout = std::min(1.0, t0 + half);
      if (tout > tin) cross.push_back({tin, tout, j});
    }
  }
  std::sort(cross.begin(), cross.end(), [](const Crossing &a, const Crossing &b) { return a.t_in < b.t_in; });
  Complex cur = p1;
  for (const Crossing &c : cross) {
    const Complex ein = p1 + c.t_in * d, eout = p1 + c.t_out * d;
    total += segment(cur, ein);
    const Complex z = poles_[c.j];
    const double a0 = std::arg(ein - z);
    const double delta = std::remainder(std::arg(eout - z) - a0, 2.0 * kPi);
    total += arc(z, r, a0, a0 + delta);
    cur = eout;
  }
  total += segment(cur, q1);
  total += segment(q1, q);
  return total;
}

Complex PathIntegralF::anchor_value(long long ix, long long iy) const {
  const auto key = std::make_pair(ix, iy);
  {
    std::shared_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  Complex c((ix + 0.5) * cell_, (iy + 0.5) * cell_);
  for (const Complex &z : poles_)
    if (std::abs(c - z) < 1e-3 * cell_) c += 0.25 * cell_;
  const Complex v = integrate(base_, c);
  std::unique_lock lock(mutex_);
  cache_.emplace(key, v);
  return v;
}

Complex PathIntegralF::value(Complex z) const {
  const long long ix = static_cast<long long>(std::floor(z.real() / cell_));
  const long long iy = static_cast<long long>(std::floor(z.imag() / cell_));
  Complex c((ix + 0.5) * cell_, (iy + 0.5) * cell_);
  for (const Complex &p : poles_)
    if (std::abs(c - p) < 1e-3 * cell_) c += 0.25 * cell_;
  return anchor_value(ix, iy) + integrate(c, z);
}

Complex PathIntegralF::residue(std::size_t j) const {
  const double rho = 0.5 * radius_;
  const int n = 512;
  Complex sum{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const Complex e = std::polar(rho, 2.0 * kPi * k / n);
    sum += fprime(poles_.at(j) + e) * e;
  }
  return sum / static_cast<double>(n);
}

std::size_t PathIntegralF::cache_size() const {
  std::shared_lock lock(mutex_);
  return cache_.size();
}

// ---------------------------------------------------------------------------
// LiouvilleSolution

LiouvilleSolution LiouvilleSolution::build(const SingularityPrescription &p) {
  p.validate();
  LiouvilleSolution s;
  s.presc_ = p;
  const std::size_t m = p.points.size();
  s.rot_ = rotation_between(normalized(p.points[m - 1]), kNorthPole);
  std::vector<int> ls;
  for (std::size_t j = 0; j + 1 < m; ++j) {
    s.z_.push_back(stereographic_forward(hns::apply(s.rot_, normalized(p.points[j]))));
    ls.push_back(p.exponents[j]);
  }
  for (std::size_t j = 0; j < s.z_.size(); ++j)
    if (ls[j] < 0 && std::abs(p.basepoint - s.z_[j]) < 1e-8)
      throw InvalidArgument("prescription: basepoint coincides with a pole of f'");
  s.pif_ = std::make_shared<const PathIntegralF>(s.z_, ls, p.basepoint);
  for (std::size_t j = 0; j < s.z_.size(); ++j) {
    if (ls[j] > -2) continue;
    const Complex res = s.pif_->residue(j);
    double scale = 0.0;
    for (int k = 0; k < 16; ++k)
      scale = std::max(scale, std::abs(s.pif_->fprime(s.z_[j] + std::polar(0.5 * s.pif_->avoid_radius(), kPi * k / 8))) *
                                  0.5 * s.pif_->avoid_radius());
    if (std::abs(res) > 1e-9 * std::max(scale, 1e-300))
      throw InvalidArgument("prescription: f' has a nonzero residue, so f is multivalued");
  }
  for (const Vec3 &x : p.points) s.domain_.excluded_points.push_back(normalized(x));
  return s;
}

LiouvilleSolution LiouvilleSolution::closed_form(const ClosedForm &g) {
  LiouvilleSolution s;
  s.closed_ = g;
  std::visit(
      [&](const auto &v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, generator::Power>) {
          if (!(std::isfinite(v.alpha) && v.alpha != 0.0)) throw InvalidArgument("power generator: alpha must be nonzero");
          if (!(std::abs(v.a) > 0.0 && std::isfinite(std::abs(v.a)))) throw InvalidArgument("power generator: a must be nonzero");
          if (std::abs(std::abs(v.alpha) - 1.0) > 0.0) s.domain_.excluded_points = {kNorthPole, kSouthPole};
        } else if constexpr (std::is_same_v<T, generator::Exp>) {
          if (!(std::abs(v.a) > 0.0 && std::abs(v.b) > 0.0)) throw InvalidArgument("exp generator: a and b must be nonzero");
          s.domain_.excluded_points = {kNorthPole};
        } else {
          if (v.k < 1) throw InvalidArgument("exp_power generator: k must be >= 1");
          s.domain_.excluded_points = {kNorthPole};
          if (v.k >= 2) s.domain_.excluded_points.push_back(kSouthPole);
        }
      },
      g);
  return s;
}

FJet LiouvilleSolution::f_and_derivatives(Complex z) const {
  if (pif_) {
    const Complex fp = pif_->fprime(z);
    return {pif_->value(z), fp, fp * pif_->log_derivative(z)};
  }
  return std::visit(
      [&](const auto &v) -> FJet {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, generator::Power>) {
          if (z == 0.0) throw DomainError("power generator at z = 0");
          const Complex f = v.a * std::pow(z, v.alpha);
          return {f, v.alpha * f / z, v.alpha * (v.alpha - 1.0) * f / (z * z)};
        } else if constexpr (std::is_same_v<T, generator::Exp>) {
          const Complex f = v.a * std::exp(v.b * z);
          return {f, v.b * f, v.b * v.b * f};
        } else {
          const double k = v.k;
          const Complex zk1 = std::pow(z, v.k - 1), f = std::exp(zk1 * z);
          const Complex fp = k * zk1 * f;
          const Complex fpp = (v.k >= 2 ? k * (k - 1.0) * std::pow(z, v.k - 2) : Complex(0.0)) * f + k * zk1 * fp;
          return {f, fp, fpp};
        }
      },
      *closed_);
}

PotentialJet LiouvilleSolution::potential_jet(Complex z) const {
  if (pif_) {
    const Complex f = pif_->value(z);
    const Complex lg = pif_->log_derivative(z);
    double lfp = 0.0;
    const auto &poles = pif_->poles();
    for (std::size_t j = 0; j < poles.size(); ++j)
      lfp += (presc_->exponents[j] - 1) * std::log(std::norm(z - poles[j]));
    const Complex fp = pif_->fprime(z);
    const double af2 = std::norm(f);
    return {af2 > 0.0 ? std::log(af2) : -kInf, lfp, lg, af2 > 0.0 ? fp / f : Complex(0.0)};
  }
  return std::visit(
      [&](const auto &v) -> PotentialJet {
        using T = std::decay_t<decltype(v)>;
        const double lz = std::log(std::norm(z));
        if constexpr (std::is_same_v<T, generator::Power>) {
          if (z == 0.0) throw DomainError("power generator at z = 0");
          const double la = std::log(std::norm(v.a));
          return {la + v.alpha * lz, la + std::log(v.alpha * v.alpha) + (v.alpha - 1.0) * lz, (v.alpha - 1.0) / z,
                  v.alpha / z};
        } else if constexpr (std::is_same_v<T, generator::Exp>) {
          const double L = std::log(std::norm(v.a)) + 2.0 * (v.b * z).real();
          return {L, L + std::log(std::norm(v.b)), v.b, v.b};
        } else {
          const double k = v.k;
          if (v.k >= 2 && z == 0.0) throw DomainError("exp_power generator at z = 0");
          const Complex zk1 = std::pow(z, v.k - 1);
          const double L = 2.0 * (zk1 * z).real();
          const Complex g = k * zk1;
          const Complex h = (v.k >= 2 ? (k - 1.0) / z : Complex(0.0)) + g;
          return {L, L + std::log(k * k) + (k - 1.0) * lz, h, g};
        }
      },
      *closed_);
}

namespace {

struct Potential {
  double xi;
  Complex w; // d xi / dz (Wirtinger)
};

Potential potential_at(const PotentialJet &j, Complex z) {
  const double z2 = std::norm(z);
  Potential out;
  const double sp = std::isfinite(j.log_abs_f2) ? softplus(j.log_abs_f2) : 0.0;
  out.xi = j.log_abs_fp2 + 2.0 * std::log1p(z2) - 2.0 * sp;
  const Complex t = std::isfinite(j.log_abs_f2) ? j.fp_over_f * logistic(j.log_abs_f2) : Complex(0.0);
  out.w = j.fpp_over_fp + 2.0 * std::conj(z) / (1.0 + z2) - 2.0 * t;
  return out;
}

} // namespace

double LiouvilleSolution::xi_hat(Complex z) const { return potential_at(potential_jet(z), z).xi; }

double LiouvilleSolution::phi(const Vec3 &x) const {
  return xi_hat(stereographic_forward(hns::apply(rot_, normalized(x))));
}

Vec3 LiouvilleSolution::velocity(const Vec3 &x_in) const {
  const Vec3 x = normalized(x_in);
  for (const Vec3 &p : domain_.excluded_points)
    if (angle_between(x, p) <= 1e-5) throw DomainError("Liouville velocity too close to a singular point");
  const Vec3 xr = hns::apply(rot_, x);
  if (xr[0] == 0.0 && xr[1] == 0.0 && xr[2] > 0.0) {
    // the chart misses this point; average four samples on a small circle
    const double e = 1e-6;
    Vec3 sum{};
    for (const Vec3 &t : {Vec3{e, 0, 0}, Vec3{-e, 0, 0}, Vec3{0, e, 0}, Vec3{0, -e, 0}})
      sum = sum + velocity(hns::apply_transpose(rot_, normalized(xr + t)));
    return 0.25 * sum;
  }
  const Complex z = stereographic_forward(xr);
  const Potential P = potential_at(potential_jet(z), z);
  const double ur = 2.0 * std::exp(P.xi) - 2.0;
  const double gx = 2.0 * P.w.real(), gy = -2.0 * P.w.imag();
  const double rho = std::hypot(xr[0], xr[1]);
  const double cphi = rho > 0.0 ? xr[0] / rho : 1.0, sphi = rho > 0.0 ? xr[1] / rho : 0.0;
  // 1 - cos(theta) without cancellation near the rotated north pole
  const double omc = xr[2] > 0.0 ? rho * rho / (1.0 + xr[2]) : 1.0 - xr[2];
  const double gth = -(cphi * gx + sphi * gy) / omc;
  const double gph = (-sphi * gx + cphi * gy) / omc;
  const Vec3 eth{xr[2] * cphi, xr[2] * sphi, -rho};
  const Vec3 eph{-sphi, cphi, 0.0};
  const Vec3 v = ur * xr + gth * eth + gph * eph;
  return hns::apply_transpose(rot_, v);
}

double LiouvilleSolution::pressure_identity(const Vec3 &x_in) const {
  const Vec3 x = normalized(x_in);
  const Vec3 u = velocity(x);
  const double ur = dot(u, x);
  const Vec3 ut = u - ur * x;
  return ur - 0.5 * dot(ut, ut);
}

double LiouvilleSolution::pressure(const Vec3 &x_in, double h) const {
  const Vec3 x = normalized(x_in);
  for (const Vec3 &p : domain_.excluded_points)
    if (angle_between(x, p) <= 8.0 * h) throw StencilContamination("pressure stencil reaches a singular point");
  const Tensor3 Q = rotation_between(x, Vec3{1.0, 0.0, 0.0});
  const SphereField local = [this, Q](double th, double ph) {
    const Vec3 yl = spherical_to_cartesian({1.0, th, ph});
    const Vec3 u = hns::apply(Q, velocity(hns::apply_transpose(Q, yl)));
    const Frame f = basis_vectors(th, ph);
    return FieldSample{dot(u, f.e_r), dot(u, f.e_theta), dot(u, f.e_phi), 0.0};
  };
  return pressure_from_velocity(local, kPi / 2, 0.0, h, true);
}

SphereField LiouvilleSolution::as_field(PressureRoute route) const {
  auto self = std::make_shared<const LiouvilleSolution>(*this);
  return [self, route](double th, double ph) {
    const Vec3 x = spherical_to_cartesian({1.0, th, ph});
    const Vec3 u = self->velocity(x);
    const Frame f = basis_vectors(th, ph);
    FieldSample s{dot(u, f.e_r), dot(u, f.e_theta), dot(u, f.e_phi), 0.0};
    s.p = route == PressureRoute::Identity ? s.u_r - 0.5 * (s.u_theta * s.u_theta + s.u_phi * s.u_phi)
                                           : self->pressure(x);
    return s;
  };
}

// ---------------------------------------------------------------------------

SlopeFit fit_slope(const LiouvilleSolution &s, const Vec3 &point) {
  SlopeFit out;
  out.point = normalized(point);
  std::vector<double> xs, ys;
  for (int j = 0; j < 8; ++j) {
    const double psi = 0.2 + 2.0 * kPi * j / 8.0;
    for (int k = 0; k <= 4; ++k) {
      const double d = 1e-2 * std::pow(10.0, -0.5 * k);
      const PolarProbe pr = probe_near(out.point, d, psi);
      xs.push_back(1.0 / d);
      ys.push_back(norm(s.velocity(pr.x)));
    }
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.slope = sxy / sxx;
  const double c = my - out.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) ss += std::pow(ys[i] - out.slope * xs[i] - c, 2);
  out.rms = std::sqrt(ss / n);
  out.ok = std::isfinite(out.slope) && std::isfinite(out.rms);
  return out;
}

std::vector<SlopeFit> verify_asymptotics(const LiouvilleSolution &s) {
  if (!s.prescription()) throw InvalidArgument("verify_asymptotics: solution was not built from a prescription");
  const auto &p = *s.prescription();
  std::vector<SlopeFit> out;
  for (std::size_t j = 0; j < p.points.size(); ++j) {
    SlopeFit f;
    try {
      f = fit_slope(s, p.points[j]);
    } catch (const Error &) {
      f.point = normalized(p.points[j]);
      f.ok = false;
    }
    f.exponent = p.exponents[j];
    f.expected = 2.0 * (std::abs(p.exponents[j]) - 1);
    out.push_back(f);
  }
  return out;
}

double liouville_defect(const LiouvilleSolution &s, double theta, double phi, double h) {
  const SphereScalar ph = [&s](double t, double p) { return s.phi(spherical_to_cartesian({1.0, t, p})); };
  const Vec3 x = spherical_to_cartesian({1.0, theta, phi});
  double clear = kPi;
  for (const Vec3 &p : s.domain().excluded_points) clear = std::min(clear, angle_between(x, p));
  const double step = std::min(h, 0.05 * clear);
  const auto &ex = s.domain().excluded_points;
  const double lap = (4.0 * laplace_beltrami(ph, theta, phi, 0.5 * step, ex) - laplace_beltrami(ph, theta, phi, step, ex)) / 3.0;
  return -lap + 2.0 - 2.0 * std::exp(ph(theta, phi));
}

} // namespace hns
