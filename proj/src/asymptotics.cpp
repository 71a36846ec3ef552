#include "hns/analysis.hpp"

#include "hns/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace hns {

std::string to_string(SingularityType t) {
  switch (t) {
  case SingularityType::Type1: return "Type1";
  case SingularityType::Type2: return "Type2";
  case SingularityType::Type3: return "Type3";
  case SingularityType::Removable: return "Removable";
  case SingularityType::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(GradientType t) {
  switch (t) {
  case GradientType::Type1p: return "Type1'";
  case GradientType::Type2p: return "Type2'";
  case GradientType::Type3p: return "Type3'";
  case GradientType::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

std::vector<double> distance_ladder() {
  std::vector<double> d;
  for (int k = 0; k <= 6; ++k) d.push_back(1e-2 * std::pow(10.0, -0.5 * k));
  return d;
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Each model fits three consecutive samples and can both predict a further
// sample and report its d -> 0 limit.
struct Fit3 {
  double limit = kNaN;
  double predicted_next = kNaN;
};

// g = L + A q^k on equally spaced ln d (geometric d).
Fit3 aitken(const double *g) {
  const double d1 = g[1] - g[0], d2 = g[2] - g[1];
  if (d1 == 0.0 || d2 == 0.0) return {g[2], g[2]};
  const double q = d2 / d1;
  if (!(std::abs(q) < 1.0)) return {};
  const double lim = g[2] + d2 * q / (1.0 - q);
  return {lim, g[2] + d2 * q};
}

// g = L + A / (s + B), s = ln d.
Fit3 rational_log(const double *g, const double *s, double s_next) {
  const double g12 = g[0] - g[1], g23 = g[1] - g[2];
  if (g23 == 0.0 || g12 == 0.0) return {g[2], g[2]};
  const double rho = g12 / g23;
  if (rho == 1.0) return {};
  const double B = (s[2] - rho * s[0]) / (rho - 1.0);
  const double A = g12 * (s[0] + B) * (s[1] + B) / (s[1] - s[0]);
  const double L = g[2] - A / (s[2] + B);
  // The pole of the model must lie outside the sampled range and beyond it.
  const double pole = -B;
  if (pole <= std::max(s[0], s[2]) && pole >= std::min(s_next, s[0])) return {};
  return {L, L + A / (s_next + B)};
}

// Quadratic through three points in w = 1 / ln d, evaluated at w and at 0.
Fit3 neville_w(const double *g, const double *w, double w_next) {
  auto eval = [&](double x) {
    double p[3] = {g[0], g[1], g[2]};
    for (int m = 1; m < 3; ++m)
      for (int i = 0; i + m < 3; ++i)
        p[i] = ((x - w[i + m]) * p[i] + (w[i] - x) * p[i + 1]) / (w[i] - w[i + m]);
    return p[0];
  };
  return {eval(0.0), eval(w_next)};
}

} // namespace

Extrapolation extrapolate_limit(const std::vector<double> &dists, const std::vector<double> &values) {
  const std::size_t n = values.size();
  if (n < 4 || dists.size() != n) throw InvalidArgument("extrapolate_limit: need at least 4 samples");
  for (double v : values)
    if (!std::isfinite(v)) throw Inconclusive("extrapolate_limit: non-finite sample");
  std::vector<double> s(n), w(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::log(dists[i]);
    w[i] = 1.0 / s[i];
  }
  struct Candidate {
    const char *name;
    double limit, prev_limit, prediction_error;
  };
  std::vector<Candidate> cands;
  const double *g_last = &values[n - 3], *g_prev = &values[n - 4];
  const double actual = values[n - 1];
  {
    const Fit3 a = aitken(g_last), b = aitken(g_prev);
    cands.push_back({"aitken", a.limit, b.limit, std::abs(b.predicted_next - actual)});
  }
  {
    const Fit3 a = rational_log(g_last, &s[n - 3], s[n - 1] + (s[n - 1] - s[n - 2]));
    const Fit3 b = rational_log(g_prev, &s[n - 4], s[n - 1]);
    cands.push_back({"rational_log", a.limit, b.limit, std::abs(b.predicted_next - actual)});
  }
  {
    const Fit3 a = neville_w(g_last, &w[n - 3], 0.0), b = neville_w(g_prev, &w[n - 4], w[n - 1]);
    cands.push_back({"poly_inv_log", a.limit, b.limit, std::abs(b.predicted_next - actual)});
  }
  const Candidate *best = nullptr;
  for (const auto &c : cands) {
    if (!std::isfinite(c.limit) || !std::isfinite(c.prediction_error)) continue;
    if (!best || c.prediction_error < best->prediction_error) best = &c;
  }
  if (!best) throw Inconclusive("extrapolate_limit: no model fits the sequence");
  Extrapolation out;
  out.value = best->limit;
  out.model = best->name;
  out.spread = std::isfinite(best->prev_limit) ? std::abs(best->limit - best->prev_limit) : std::abs(best->limit - actual);
  return out;
}

PolarProbe probe_near(const Vec3 &pole_in, double d, double psi) {
  const Vec3 P = normalized(pole_in);
  Vec3 a, b;
  if (std::abs(P[2]) > 1.0 - 1e-15) {
    a = {1.0, 0.0, 0.0};
    b = {0.0, 1.0, 0.0};
  } else {
    a = normalized(cross({0.0, 0.0, 1.0}, P));
    b = cross(P, a);
  }
  const Vec3 radial = std::cos(psi) * a + std::sin(psi) * b;
  PolarProbe out;
  out.x = std::cos(d) * P + std::sin(d) * radial;
  out.e_d = (-std::sin(d)) * P + std::cos(d) * radial;
  out.e_psi = (-std::sin(psi)) * a + std::cos(psi) * b;
  return out;
}

namespace {

bool is_north(const Vec3 &pole) { return normalized(pole)[2] > 1.0 - 1e-15; }

std::array<double, 4> azimuths4() { return {0.3, 0.3 + kPi / 2, 0.3 + kPi, 0.3 + 1.5 * kPi}; }

// Extrapolates g(d, psi) for 4 azimuths and combines them.
template <class G>
Extrapolation extrapolate_azimuths(const G &g) {
  const auto ds = distance_ladder();
  double sum = 0.0, lo = 1e300, hi = -1e300, spread = 0.0;
  std::string model;
  for (double psi : azimuths4()) {
    std::vector<double> vals;
    for (double d : ds) vals.push_back(g(d, psi));
    const Extrapolation e = extrapolate_limit(ds, vals);
    sum += e.value;
    lo = std::min(lo, e.value);
    hi = std::max(hi, e.value);
    spread = std::max(spread, e.spread);
    model = e.model;
  }
  Extrapolation out;
  out.value = sum / 4.0;
  out.spread = std::max(spread, hi - lo);
  out.model = model;
  return out;
}

} // namespace

Extrapolation extract_tau(const FieldSource &src, const Vec3 &pole) {
  const double sgn = is_north(pole) ? 1.0 : -1.0;
  return extrapolate_azimuths([&](double d, double psi) {
    const PolarProbe pr = probe_near(pole, d, psi);
    return sgn * std::sin(d) * dot(velocity_cartesian(src.field, pr.x), pr.e_d);
  });
}

Extrapolation extract_sigma(const FieldSource &src, const Vec3 &pole) {
  return extrapolate_azimuths([&](double d, double psi) {
    const PolarProbe pr = probe_near(pole, d, psi);
    return std::sin(d) * dot(velocity_cartesian(src.field, pr.x), pr.e_psi);
  });
}

Extrapolation extract_eta(const FieldSource &src, const Vec3 &pole) {
  const Extrapolation tau = extract_tau(src, pole);
  if (std::abs(tau.value - 2.0) > 0.05) throw InvalidArgument("extract_eta: tau is not 2");
  const double sgn = is_north(pole) ? 1.0 : -1.0;
  return extrapolate_azimuths([&](double d, double psi) {
    const PolarProbe pr = probe_near(pole, d, psi);
    const double g = sgn * std::sin(d) * dot(velocity_cartesian(src.field, pr.x), pr.e_d);
    return (g - 2.0) * std::log(std::sin(d));
  });
}

SwirlFits fit_swirl(const FieldSource &src, const Vec3 &pole) {
  const auto ds = distance_ladder();
  std::vector<double> xs, ys;
  for (double d : ds) {
    double sum = 0.0;
    for (int k = 0; k < 4; ++k) {
      const PolarProbe pr = probe_near(pole, d, 0.3 + k * kPi / 2);
      sum += std::sin(d) * dot(velocity_cartesian(src.field, pr.x), pr.e_psi);
    }
    xs.push_back(std::log(d));
    ys.push_back(0.25 * sum);
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  SwirlFits f;
  f.constant = my;
  f.log_slope = sxy / sxx;
  f.log_intercept = my - f.log_slope * mx;
  double rc = 0.0, rl = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    rc += (ys[i] - my) * (ys[i] - my);
    rl += std::pow(ys[i] - f.log_intercept - f.log_slope * xs[i], 2);
  }
  f.constant_rms = std::sqrt(rc / n);
  f.log_rms = std::sqrt(rl / n);
  return f;
}

std::optional<double> snap_eta(double fit) {
  if (std::abs(fit) <= 0.1) return 0.0;
  if (std::abs(fit - 2.0) <= 0.1) return 2.0;
  return std::nullopt;
}

LogSlopeFit extract_log_slope(const FieldSource &src, const Vec3 &pole) {
  std::vector<double> xs, ys;
  for (int j = 0; j < 8; ++j) {
    const double psi = 0.1 + 2.0 * kPi * j / 8.0;
    for (double d : distance_ladder()) {
      const PolarProbe pr = probe_near(pole, d, psi);
      xs.push_back(std::abs(std::log(d)));
      ys.push_back(norm(velocity_cartesian(src.field, pr.x)));
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
  LogSlopeFit out;
  out.kappa = sxy / sxx;
  out.intercept = my - out.kappa * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - out.kappa * xs[i] - out.intercept;
    ss += r * r;
  }
  out.rms = std::sqrt(ss / n);
  const double span = std::abs(out.kappa) * (xs.front() > xs.back() ? xs.front() - xs.back() : xs.back() - xs.front());
  out.nonlinear = out.rms > 0.05 * std::max(span, 1e-12) && out.rms > 1e-6;
  return out;
}

SingularityReport classify(const FieldSource &src, const Vec3 &pole, const Thresholds &th) {
  SingularityReport rep;
  rep.pole = normalized(pole);
  try {
    const Extrapolation tau = extract_tau(src, pole);
    const Extrapolation sig = extract_sigma(src, pole);
    const LogSlopeFit k = extract_log_slope(src, pole);
    rep.tau_hat = tau.value;
    rep.sigma_hat = sig.value;
    rep.kappa_hat = k.kappa;
    rep.kappa_nonlinear = k.nonlinear;
    if (std::abs(tau.value - 2.0) <= 0.05) {
      try {
        rep.eta_hat = snap_eta(extract_eta(src, pole).value);
        if (rep.eta_hat == 0.0) rep.swirl = fit_swirl(src, pole);
      } catch (const Error &) {
      }
    }
    const double worst_spread = std::max(tau.spread, sig.spread);
    rep.confidence = std::exp(-worst_spread / th.tau);
    if (std::abs(tau.value) > th.tau || std::abs(sig.value) > th.sigma) {
      rep.type = SingularityType::Type3;
    } else if (k.kappa > th.kappa) {
      rep.type = SingularityType::Type2;
    } else {
      rep.type = src.domain.smooth() ? SingularityType::Type1 : SingularityType::Removable;
    }
  } catch (const Error &) {
    rep.type = SingularityType::Inconclusive;
    rep.confidence = 0.0;
  }
  return rep;
}

bool removability_test(const FieldSource &src, const Vec3 &pole, const Thresholds &th) {
  const SingularityType t = classify(src, pole, th).type;
  return t == SingularityType::Type1 || t == SingularityType::Removable;
}

GradientReport gradient_classify(const FieldSource &src, const Vec3 &pole, const Thresholds &th) {
  const Vec3 P = normalized(pole);
  if (std::abs(P[2]) < 1.0 - 1e-15) throw InvalidArgument("gradient_classify: pole must be N or S");
  const bool north = P[2] > 0.0;
  const auto ds = distance_ladder();
  std::vector<double> q1, q2;
  for (double d : ds) {
    const double theta = north ? d : kPi - d;
    const double g = frobenius(gradient_tensor_axisym(src.field, theta, 1.0, 1e-3 * d));
    q1.push_back(d * g);
    q2.push_back(d * d * g);
  }
  GradientReport rep;
  try {
    rep.q2 = extrapolate_limit(ds, q2).value;
    if (std::abs(rep.q2) > th.grad_q2) {
      rep.type = GradientType::Type3p;
      rep.q1 = std::numeric_limits<double>::infinity();
      return rep;
    }
    rep.q1 = extrapolate_limit(ds, q1).value;
    rep.type = std::abs(rep.q1) > th.grad_q1 ? GradientType::Type2p : GradientType::Type1p;
  } catch (const Error &) {
    rep.type = GradientType::Inconclusive;
  }
  return rep;
}

GrowthBound growth_bound(const FieldSource &src, const Vec3 &pole) {
  GrowthBound out;
  double inner = 0.0, outer = 0.0;
  const double split = std::pow(10.0, -3.5);
  for (int j = 0; j < 8; ++j) {
    const double psi = 0.1 + 2.0 * kPi * j / 8.0;
    for (double d : distance_ladder()) {
      const PolarProbe pr = probe_near(pole, d, psi);
      const double env = d * std::log(d);
      const double q = norm(velocity_cartesian(src.field, pr.x)) * env * env;
      out.K = std::max(out.K, q);
      double &bucket = d < split * (1 - 1e-12) ? inner : outer;
      bucket = std::max(bucket, q);
    }
  }
  out.trend = outer > 0.0 ? inner / outer : 0.0;
  // d^2 ln^2(d) u_r along the first azimuth, extrapolated.
  std::vector<double> sat;
  const auto ds = distance_ladder();
  for (double d : ds) {
    const PolarProbe pr = probe_near(pole, d, 0.1);
    const double env = std::sin(d) * std::log(std::sin(d));
    sat.push_back(dot(velocity_cartesian(src.field, pr.x), pr.x) * env * env);
  }
  out.saturation = extrapolate_limit(ds, sat).value;
  return out;
}

} // namespace hns
