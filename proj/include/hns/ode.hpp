#pragma once

// Adaptive Dormand-Prince 5(4) integrator with Hairer's continuous extension.

#include "hns/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace hns::ode {

template <std::size_t N>
using State = std::array<double, N>;

/// One accepted step with its dense-output coefficients. Valid for t between
/// t0 and t0 + h (h may be negative).
template <std::size_t N>
struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  std::array<State<N>, 5> r{};

  double t_lo() const { return std::min(t0, t0 + h); }
  double t_hi() const { return std::max(t0, t0 + h); }

  State<N> value(double t) const {
    const double s = (t - t0) / h, q = 1.0 - s;
    State<N> y;
    for (std::size_t i = 0; i < N; ++i)
      y[i] = r[0][i] + s * (r[1][i] + q * (r[2][i] + s * (r[3][i] + q * r[4][i])));
    return y;
  }

  State<N> derivative(double t) const {
    const double s = (t - t0) / h, q = 1.0 - s;
    State<N> d;
    for (std::size_t i = 0; i < N; ++i) {
      const double a = r[3][i] + q * r[4][i], da = -r[4][i];
      const double b = r[2][i] + s * a, db = a + s * da;
      const double c = r[1][i] + q * b, dc = -b + q * db;
      d[i] = (c + s * dc) / h;
    }
    return d;
  }
};

/// Piecewise dense solution assembled from accepted steps, kept sorted by time.
template <std::size_t N>
class DenseSolution {
public:
  void append(const std::vector<DenseStep<N>> &steps) {
    steps_.insert(steps_.end(), steps.begin(), steps.end());
    std::sort(steps_.begin(), steps_.end(),
              [](const DenseStep<N> &a, const DenseStep<N> &b) { return a.t_lo() < b.t_lo(); });
  }

  bool empty() const { return steps_.empty(); }
  double t_min() const { return steps_.front().t_lo(); }
  double t_max() const { return steps_.back().t_hi(); }
  bool covers(double t) const { return !empty() && t >= t_min() && t <= t_max(); }

  State<N> value(double t) const { return locate(t).value(t); }
  State<N> derivative(double t) const { return locate(t).derivative(t); }
  std::size_t size() const { return steps_.size(); }
  const std::vector<DenseStep<N>> &steps() const { return steps_; }

private:
  const DenseStep<N> &locate(double t) const {
    if (!covers(t)) throw DomainError("dense solution queried outside its range");
    auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                               [](double v, const DenseStep<N> &s) { return v < s.t_lo(); });
    if (it != steps_.begin()) --it;
    return *it;
  }

  std::vector<DenseStep<N>> steps_;
};

struct Options {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_initial = 1e-3;
  double h_min = 1e-14;
  std::size_t max_steps = 200000;
};

enum class Status { Completed, Stopped, StepUnderflow, MaxSteps };

template <std::size_t N>
struct Result {
  Status status = Status::Completed;
  double t_reached = 0.0;
  State<N> y_reached{};
  std::vector<DenseStep<N>> steps;
};

struct NeverStop {
  template <class S>
  bool operator()(double, const S &) const { return false; }
};

/// Integrates y' = rhs(t, y) from t0 to t1 (either direction). `stop(t, y)`
/// is checked after every accepted step and ends integration early.
template <std::size_t N, class Rhs, class Stop = NeverStop>
Result<N> integrate(const Rhs &rhs, double t0, const State<N> &y0, double t1,
                    const Options &opt = {}, const Stop &stop = {}) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                          a75 = -2187.0 / 6784, a76 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                          d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                          d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

  Result<N> out;
  const double dir = t1 >= t0 ? 1.0 : -1.0;
  double t = t0;
  State<N> y = y0;
  out.t_reached = t;
  out.y_reached = y;
  if (t0 == t1) return out;

  double h = dir * std::min(std::abs(opt.h_initial), std::abs(t1 - t0));
  State<N> k1 = rhs(t, y), k2, k3, k4, k5, k6, k7, tmp, y_new;

  for (std::size_t n = 0; n < opt.max_steps; ++n) {
    if (dir * (t + h - t1) > 0.0) h = t1 - t;

    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    k2 = rhs(t + c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = rhs(t + c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = rhs(t + c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    k5 = rhs(t + c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    k6 = rhs(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    k7 = rhs(t + h, y_new);

    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const double ei =
          h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      err += (ei / sc) * (ei / sc);
      finite = finite && std::isfinite(y_new[i]);
    }
    err = finite ? std::sqrt(err / static_cast<double>(N)) : 1e300;

    if (err <= 1.0) {
      DenseStep<N> step;
      step.t0 = t;
      step.h = h;
      for (std::size_t i = 0; i < N; ++i) {
        const double ydiff = y_new[i] - y[i];
        const double bspl = h * k1[i] - ydiff;
        step.r[0][i] = y[i];
        step.r[1][i] = ydiff;
        step.r[2][i] = bspl;
        step.r[3][i] = ydiff - h * k7[i] - bspl;
        step.r[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
      }
      out.steps.push_back(step);
      t += h;
      y = y_new;
      k1 = k7;
      out.t_reached = t;
      out.y_reached = y;
      if (stop(t, y)) {
        out.status = Status::Stopped;
        return out;
      }
      if (dir * (t1 - t) <= 0.0) return out;
    }

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= err <= 1.0 ? factor : std::min(factor, 1.0);
    if (std::abs(h) < opt.h_min) {
      out.status = Status::StepUnderflow;
      return out;
    }
  }
  out.status = Status::MaxSteps;
  return out;
}

} // namespace hns::ode
