#include "hns/analysis.hpp"

#include "hns/errors.hpp"

#include <algorithm>
#include <cmath>
#include <omp.h>

namespace hns {

FieldSource source_of(const SolutionSpec &spec) { return {as_field(spec), spec.domain()}; }

std::vector<std::pair<double, double>> sphere_grid(const DomainDescriptor &domain, int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw InvalidArgument("grid needs n_theta, n_phi >= 1");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(n_theta) * n_phi);
  const double lo = domain.theta_min, hi = domain.theta_max;
  for (int i = 0; i < n_theta; ++i) {
    const double t = lo + (i + 0.5) * (hi - lo) / n_theta;
    for (int j = 0; j < n_phi; ++j) pts.emplace_back(t, 2.0 * kPi * (j + 0.25) / n_phi);
  }
  return pts;
}

double clearance(const DomainDescriptor &domain, double theta, double phi) {
  const Vec3 x = spherical_to_cartesian({1.0, theta, phi});
  double d = std::min(theta - domain.theta_min, domain.theta_max - theta);
  for (const Vec3 &s : domain.excluded_points) d = std::min(d, std::acos(std::clamp(dot(x, s), -1.0, 1.0)));
  return d;
}

namespace {

struct PointResult {
  bool ok = false;
  double momentum = 0.0;
  double divergence = 0.0;
  double relative = 0.0;
};

PointResult residual_at(const FieldSource &src, double theta, double phi, double r, const GridSpec &g,
                        bool viscous) {
  PointResult out;
  const double c = clearance(src.domain, theta, phi);
  if (!(c > 0.0) || c < g.margin) return out;
  const double step = g.step;
  const Vec3 x = spherical_to_cartesian({r, theta, phi});
  try {
    // Step follows the smaller of the geometric clearance and the local
    // variation length |u| / |grad u|.
    double h = step * r * std::min(1.0, c);
    const double speed = norm(velocity_cartesian(src.field, x));
    if (!(speed * r <= g.max_speed)) return out;
    const double grad = frobenius(jacobian_3d(src.field, x, h));
    if (grad > 0.0 && speed > 0.0) h = std::min(h, step * speed / grad);
    const OperatorValue v = ns_operator_3d(src.field, x, h, viscous, src.domain.excluded_points);
    out.momentum = norm(v.momentum);
    out.divergence = std::abs(v.divergence);
    out.relative = v.scale > 0.0 ? out.momentum / v.scale : 0.0;
    out.ok = std::isfinite(out.momentum) && std::isfinite(out.divergence);
  } catch (const StencilContamination &) {
  } catch (const DomainError &) {
  }
  return out;
}

ResidualReport summarize(const std::vector<PointResult> &res) {
  ResidualReport rep;
  double sq = 0.0;
  for (const auto &r : res) {
    if (!r.ok) {
      ++rep.excluded;
      continue;
    }
    ++rep.n_points;
    rep.max_momentum = std::max(rep.max_momentum, r.momentum);
    rep.max_divergence = std::max(rep.max_divergence, r.divergence);
    rep.max_relative = std::max(rep.max_relative, r.relative);
    sq += r.momentum * r.momentum;
  }
  if (rep.n_points == 0) throw Inconclusive("residual: no usable grid points");
  rep.rms_momentum = std::sqrt(sq / rep.n_points);
  return rep;
}

struct Task {
  double theta, phi, r;
};

std::vector<Task> tasks_for(const FieldSource &src, const GridSpec &grid) {
  if (grid.radii.empty()) throw InvalidArgument("grid needs at least one radius");
  for (double r : grid.radii)
    if (!(r > 0.0)) throw InvalidArgument("grid radii must be positive");
  if (!(grid.step > 0.0)) throw InvalidArgument("grid step must be positive");
  std::vector<Task> tasks;
  for (const auto &[t, p] : sphere_grid(src.domain, grid.n_theta, grid.n_phi))
    for (double r : grid.radii) tasks.push_back({t, p, r});
  return tasks;
}

} // namespace

ResidualReport residual_serial(const FieldSource &src, const GridSpec &grid, bool viscous) {
  const auto tasks = tasks_for(src, grid);
  std::vector<PointResult> res(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i)
    res[i] = residual_at(src, tasks[i].theta, tasks[i].phi, tasks[i].r, grid, viscous);
  return summarize(res);
}

ResidualReport residual_parallel(const FieldSource &src, const GridSpec &grid, bool viscous) {
  const auto tasks = tasks_for(src, grid);
  std::vector<PointResult> res(tasks.size());
  const long n = static_cast<long>(tasks.size());
#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < n; ++i)
    res[i] = residual_at(src, tasks[i].theta, tasks[i].phi, tasks[i].r, grid, viscous);
  return summarize(res);
}

ResidualReport ns_residual(const FieldSource &src, const GridSpec &grid) {
  return residual_parallel(src, grid, true);
}

ResidualReport euler_residual(const FieldSource &src, const GridSpec &grid) {
  return residual_parallel(src, grid, false);
}

} // namespace hns
