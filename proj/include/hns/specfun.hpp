#pragma once

#include "hns/ode.hpp"

#include <span>
#include <utility>

namespace hns {

/// Complete elliptic integral of the first kind in the parameter convention,
/// K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt, for m in [0, 1).
double elliptic_K(double m);

/// Complete elliptic integral of the second kind, E(m), for m in [0, 1].
double elliptic_E(double m);

/// K(m) and E(m) from the parameter and its complement m1 = 1 - m supplied
/// separately, so that m near 1 keeps full relative accuracy in m1.
struct EllipticPair {
  double K;
  double E;
};
EllipticPair elliptic_KE(double m, double m1);

/// Solution of 2 (1 - y^2) chi'' = c3 chi on a closed sub-interval of (-1, 1).
class ChiSolution {
public:
  /// Value and first derivative at y.
  std::pair<double, double> operator()(double y) const;

  double c3() const { return c3_; }
  double y_min() const { return dense_.t_min(); }
  double y_max() const { return dense_.t_max(); }

  /// max |2(1-y^2) chi'' - c3 chi| / (1 + |chi|) over `grid`, with chi''
  /// taken from the dense-output derivative of chi'.
  double residual(std::span<const double> grid) const;

private:
  friend ChiSolution chi_solve(double, double, std::pair<double, double>, std::span<const double>);
  double c3_ = 0.0;
  ode::DenseSolution<2> dense_;
};

/// Margin kept away from the regular-singular endpoints y = +-1.
inline constexpr double kChiEndpointMargin = 1e-6;

/// Integrates the chi equation from (chi(y0), chi'(y0)) across every point of
/// `grid`. Rejects grids reaching within kChiEndpointMargin of +-1.
ChiSolution chi_solve(double c3, double y0, std::pair<double, double> init,
                      std::span<const double> grid);

/// U_theta = 2 (1 - y^2) chi'/chi. Throws DomainError at a zero of chi.
double u_theta_from_chi(const ChiSolution &chi, double y);

/// Bisection for a sign change of f on [a, b] to absolute tolerance `tol`.
template <class F>
double bisect_root(const F &f, double a, double b, double tol = 1e-12) {
  double fa = f(a);
  for (int i = 0; i < 200 && b - a > tol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

} // namespace hns
