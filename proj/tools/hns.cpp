// hns: evaluate, verify and classify homogeneous Navier-Stokes solutions.
//
// Exit codes: 0 pass, 1 verification failure, 2 input error, 3 inconclusive.

#include "hns/analysis.hpp"
#include "hns/errors.hpp"
#include "hns/families.hpp"
#include "hns/json_io.hpp"
#include "hns/liouville.hpp"
#include "hns/reduced_ode.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace hns;
using nlohmann::json;

namespace {

enum Exit { kPass = 0, kFail = 1, kInput = 2, kInconclusive = 3 };

struct Globals {
  std::string out;
  double tol_residual = 1e-5;
  double tol_divergence = 1e-6;
  int n_theta = 24;
  int n_phi = 12;
  std::vector<double> radii{1.0};
  std::optional<unsigned> seed;
};

void diag(const std::string &kind, const std::string &msg) {
  std::cerr << json{{"error", kind}, {"message", msg}}.dump() << '\n';
}

json read_json(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error &e) {
    throw InvalidArgument(std::string("malformed JSON: ") + e.what());
  }
}

// Writes to --out when given, otherwise to stdout.
class Sink {
public:
  explicit Sink(const std::string &path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InvalidArgument("cannot write '" + path + "'");
    }
  }
  std::ostream &os() { return file_.is_open() ? static_cast<std::ostream &>(file_) : std::cout; }

private:
  std::ofstream file_;
};

std::string sci(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", x);
  return buf;
}

GridSpec grid_of(const Globals &g) {
  if (g.n_theta < 1 || g.n_phi < 1) throw InvalidArgument("grid needs at least one point per direction");
  for (double r : g.radii)
    if (!(r > 0.0)) throw InvalidArgument("radii must be positive");
  GridSpec s;
  s.n_theta = g.n_theta;
  s.n_phi = g.n_phi;
  s.radii = g.radii;
  return s;
}

// (theta, phi) over the whole sphere, cell-centred in theta; optional jitter.
std::vector<std::pair<double, double>> eval_grid(const Globals &g) {
  if (g.n_theta < 0 || g.n_phi < 0) throw InvalidArgument("grid sizes must be non-negative");
  std::vector<std::pair<double, double>> pts;
  std::optional<std::mt19937_64> rng;
  if (g.seed) rng.emplace(*g.seed);
  std::uniform_real_distribution<double> jit(-0.25, 0.25);
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      double t = (i + 0.5) * kPi / g.n_theta, p = 2.0 * kPi * j / g.n_phi;
      if (rng) {
        t += jit(*rng) * kPi / g.n_theta;
        p += jit(*rng) * 2.0 * kPi / g.n_phi;
      }
      pts.emplace_back(t, p);
    }
  return pts;
}

bool near_excluded(const DomainDescriptor &d, double t, double p) {
  const Vec3 x = spherical_to_cartesian({1.0, t, p});
  for (const Vec3 &s : d.excluded_points)
    if (norm(x - s) < 1e-6) return true;
  return false;
}

void write_rows(std::ostream &os, const SphereField &f, const DomainDescriptor &dom, const Globals &g) {
  os << "theta,phi,u_r,u_theta,u_phi,p\n";
  int omitted = 0;
  for (const auto &[t, p] : eval_grid(g)) {
    if (!dom.contains(t) || near_excluded(dom, t, p)) {
      ++omitted;
      continue;
    }
    FieldSample s;
    try {
      s = f(t, p);
    } catch (const DomainError &) {
      ++omitted;
      continue;
    } catch (const StencilContamination &) {
      ++omitted;
      continue;
    }
    os << sci(t) << ',' << sci(p) << ',' << sci(s.u_r) << ',' << sci(s.u_theta) << ',' << sci(s.u_phi) << ','
       << sci(s.p) << '\n';
  }
  if (omitted > 0) std::cerr << json{{"omitted", omitted}, {"reason", "outside domain"}}.dump() << '\n';
}

// A catalog spec or a Liouville prescription / closed form.
FieldSource source_from_json(const json &j) {
  if (j.is_object() && j.contains("family")) return source_of(spec_from_json(j));
  const LiouvilleSolution s = liouville_from_json(j);
  return FieldSource{s.as_field(), s.domain()};
}

Vec3 parse_pole(const std::string &s) {
  if (s == "N" || s == "n") return kNorthPole;
  if (s == "S" || s == "s") return kSouthPole;
  std::stringstream ss(s);
  Vec3 v{};
  char c1 = 0, c2 = 0;
  if (!(ss >> v[0] >> c1 >> v[1] >> c2 >> v[2]) || c1 != ',' || c2 != ',' || !(ss >> std::ws).eof())
    throw InvalidArgument("pole must be S, N or x,y,z");
  if (!(norm(v) > 0.0)) throw InvalidArgument("pole vector must be nonzero");
  return normalized(v);
}

int cmd_eval(const Globals &g, const std::string &file) {
  const FieldSource src = source_from_json(read_json(file));
  Sink sink(g.out);
  write_rows(sink.os(), src.field, src.domain, g);
  return kPass;
}

int cmd_verify(const Globals &g, const std::string &file, bool euler, double max_speed) {
  const FieldSource src = source_from_json(read_json(file));
  GridSpec grid = grid_of(g);
  grid.max_speed = max_speed;
  const ResidualReport r = euler ? euler_residual(src, grid) : ns_residual(src, grid);
  const bool pass = r.max_momentum < g.tol_residual && r.max_divergence < g.tol_divergence;
  json j = to_json(r);
  j["mode"] = euler ? "euler" : "navier_stokes";
  j["tol_residual"] = g.tol_residual;
  j["tol_divergence"] = g.tol_divergence;
  j["pass"] = pass;
  Sink sink(g.out);
  sink.os() << j.dump(2) << '\n';
  return pass ? kPass : kFail;
}

int cmd_classify(const Globals &g, const std::string &file, const std::string &pole, bool gradient,
                 bool growth) {
  const FieldSource src = source_from_json(read_json(file));
  const Vec3 P = parse_pole(pole);
  const SingularityReport r = classify(src, P);
  json j = to_json(r);
  bool inconclusive = r.type == SingularityType::Inconclusive;
  if (gradient) {
    const GradientReport gr = gradient_classify(src, P);
    j["gradient"] = to_json(gr);
    inconclusive = inconclusive || gr.type == GradientType::Inconclusive;
  }
  if (growth) j["growth"] = to_json(growth_bound(src, P));
  Sink sink(g.out);
  sink.os() << j.dump(2) << '\n';
  return inconclusive ? kInconclusive : kPass;
}

int cmd_liouville(const Globals &g, const std::string &file, const std::string &report_path) {
  const LiouvilleSolution s = liouville_from_json(read_json(file));
  {
    Sink sink(g.out);
    write_rows(sink.os(), s.as_field(), s.domain(), g);
  }
  json slopes = json::array();
  bool pass = true;
  if (s.prescription()) {
    for (const SlopeFit &f : verify_asymptotics(s)) {
      json e = to_json(f);
      const bool ok = f.ok && std::abs(f.slope - f.expected) <= 0.03 * f.expected;
      e["within_tolerance"] = ok;
      pass = pass && ok;
      slopes.push_back(e);
    }
  }
  const json rep{{"slopes", slopes}, {"pass", pass}};
  if (report_path.empty()) {
    std::cerr << rep.dump() << '\n';
  } else {
    std::ofstream os(report_path);
    if (!os) throw InvalidArgument("cannot write '" + report_path + "'");
    os << rep.dump(2) << '\n';
  }
  return pass ? kPass : kFail;
}

int cmd_gamma_bounds(const Globals &g, double c1, double c2, double c3, double width) {
  const RegionProbe r = estimate_gamma_bounds(c1, c2, c3, width);
  Sink sink(g.out);
  sink.os() << to_json(r).dump(2) << '\n';
  return kPass;
}

struct OdeArgs {
  double c1 = 0, c2 = 0, c3 = 0, gamma = 0;
  double u_phi = 0, u_phi_prime = 0, y0 = 0;
  double y_lo = -0.9, y_hi = 0.9;
  int rows = 181;
};

int cmd_ode(const Globals &g, const OdeArgs &a) {
  if (a.rows < 2) throw InvalidArgument("need at least two rows");
  ReducedState init;
  init.y = a.y0;
  init.U_theta = a.gamma;
  init.U_phi = a.u_phi;
  init.U_phi_prime = a.u_phi_prime;
  const Trajectory t = integrate_reduced(init, ReducedConstants::from_c(a.c1, a.c2, a.c3, a.y0), a.y_lo, a.y_hi);
  Sink sink(g.out);
  write_trajectory_csv(t, sink.os(), a.rows);
  if (t.blew_up()) {
    json j{{"blow_up", true}};
    if (t.escape_lo()) j["escape_lo"] = *t.escape_lo();
    if (t.escape_hi()) j["escape_hi"] = *t.escape_hi();
    std::cerr << j.dump() << '\n';
  }
  return kPass;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Homogeneous Navier-Stokes solutions with singular rays"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  unsigned seed = 0;
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--tol-residual", g.tol_residual, "Momentum residual tolerance")->capture_default_str();
  app.add_option("--tol-divergence", g.tol_divergence, "Divergence tolerance")->capture_default_str();
  app.add_option("--grid-ntheta", g.n_theta, "Colatitudes")->capture_default_str();
  app.add_option("--grid-nphi", g.n_phi, "Azimuths")->capture_default_str();
  app.add_option("--radii", g.radii, "Radii for 3D residual sampling")->capture_default_str();
  auto *seed_opt = app.add_option("--seed", seed, "Jitter the evaluation grid with this seed");

  std::string file, pole = "S", report;
  bool euler = false, gradient = false, growth = false;
  double max_speed = INFINITY, width = 1e-3;
  double c1 = 0, c2 = 0, c3 = 0;
  OdeArgs ode;

  auto *eval = app.add_subcommand("eval", "CSV of (theta, phi, u_r, u_theta, u_phi, p) on a grid");
  eval->add_option("spec", file, "Solution spec JSON")->required();

  auto *verify = app.add_subcommand("verify", "3D residual report; exit 1 above tolerance");
  verify->add_option("spec", file, "Solution spec or prescription JSON")->required();
  verify->add_flag("--euler", euler, "Drop the viscous term");
  verify->add_option("--max-speed", max_speed, "Skip points with r|u| above this");

  auto *cls = app.add_subcommand("classify", "Singularity report at a pole");
  cls->add_option("spec", file, "Solution spec JSON")->required();
  cls->add_option("--pole", pole, "S, N or x,y,z")->capture_default_str();
  cls->add_flag("--gradient", gradient, "Also classify by |grad u| (axisymmetric fields, N or S)");
  cls->add_flag("--growth", growth, "Also report the growth envelope");

  auto *lio = app.add_subcommand("liouville", "Field CSV and slope report for a prescription");
  lio->add_option("prescription", file, "Prescription or closed-form JSON")->required();
  lio->add_option("--report", report, "Slope report file (default stderr)");

  auto *gb = app.add_subcommand("gamma-bounds", "Admissible interval of U_theta(0)");
  gb->add_option("c1", c1)->required();
  gb->add_option("c2", c2)->required();
  gb->add_option("c3", c3)->required();
  gb->add_option("--width", width, "Bracket width")->capture_default_str();

  auto *od = app.add_subcommand("ode", "Reduced ODE trajectory as CSV");
  od->add_option("--c1", ode.c1);
  od->add_option("--c2", ode.c2);
  od->add_option("--c3", ode.c3);
  od->add_option("--gamma", ode.gamma, "U_theta at the anchor");
  od->add_option("--u-phi", ode.u_phi, "U_phi at the anchor");
  od->add_option("--u-phi-prime", ode.u_phi_prime, "dU_phi/dy at the anchor");
  od->add_option("--y0", ode.y0, "Anchor");
  od->add_option("--y-lo", ode.y_lo)->capture_default_str();
  od->add_option("--y-hi", ode.y_hi)->capture_default_str();
  od->add_option("--rows", ode.rows)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    diag("usage", e.what());
    return kInput;
  }
  if (*seed_opt) g.seed = seed;

  try {
    if (*eval) return cmd_eval(g, file);
    if (*verify) return cmd_verify(g, file, euler, max_speed);
    if (*cls) return cmd_classify(g, file, pole, gradient, growth);
    if (*lio) return cmd_liouville(g, file, report);
    if (*gb) return cmd_gamma_bounds(g, c1, c2, c3, width);
    if (*od) return cmd_ode(g, ode);
  } catch (const InvalidArgument &e) {
    diag("input", e.what());
    return kInput;
  } catch (const DomainError &e) {
    diag("domain", e.what());
    return kInput;
  } catch (const Inconclusive &e) {
    diag("inconclusive", e.what());
    return kInconclusive;
  } catch (const Error &e) {
    diag("numerical", e.what());
    return kInconclusive;
  } catch (const json::exception &e) {
    diag("input", e.what());
    return kInput;
  }
  return kInput;
}
