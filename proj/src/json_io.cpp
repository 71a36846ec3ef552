#include "hns/json_io.hpp"

#include "hns/errors.hpp"

#include <algorithm>
#include <array>

#include <cmath>
#include <initializer_list>
#include <limits>
#include <memory>
#include <string>

namespace hns {
namespace {

using nlohmann::json;

void expect_keys(const json &p, std::initializer_list<const char *> keys) {
  if (!p.is_object()) throw InvalidArgument("params must be an object");
  for (const auto &[k, v] : p.items()) {
    bool known = false;
    for (const char *name : keys) known = known || k == name;
    if (!known) throw InvalidArgument("unknown parameter '" + k + "'");
  }
  for (const char *name : keys)
    if (!p.contains(name)) throw InvalidArgument(std::string("missing parameter '") + name + "'");
}

double num(const json &p, const char *key) {
  const json &v = p.at(key);
  if (!v.is_number()) throw InvalidArgument(std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

int integer(const json &p, const char *key) {
  const json &v = p.at(key);
  if (!v.is_number_integer()) throw InvalidArgument(std::string("parameter '") + key + "' must be an integer");
  return v.get<int>();
}

Complex complex_of(const json &v, const char *key) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw InvalidArgument(std::string("'") + key + "' must be a number or [re, im]");
}

json vec_json(const Vec3 &v) { return json::array({v[0], v[1], v[2]}); }

// JSON has no infinity; non-finite values are written as strings.
json real(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

} // namespace

SolutionSpec spec_from_json(const json &j) {
  using namespace family;
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw InvalidArgument("solution spec needs a string 'family'");
  for (const auto &[k, v] : j.items())
    if (k != "family" && k != "params") throw InvalidArgument("unknown field '" + k + "'");
  const std::string tag = j.at("family").get<std::string>();
  const json p = j.value("params", json::object());

  if (tag == "landau") {
    expect_keys(p, {"sigma"});
    return SolutionSpec(Landau{num(p, "sigma")});
  }
  if (tag == "no_swirl_one_sing") {
    expect_keys(p, {"tau", "sigma"});
    return SolutionSpec(NoSwirlOneSing{num(p, "tau"), num(p, "sigma")});
  }
  if (tag == "type_two_log") {
    expect_keys(p, {"alpha"});
    return SolutionSpec(TypeTwoLog{num(p, "alpha")});
  }
  if (tag == "elliptic_c3_half") {
    expect_keys(p, {"alpha"});
    const json &a = p.at("alpha");
    if (a.is_string()) {
      const auto s = a.get<std::string>();
      if (s != "inf" && s != "infinity") throw InvalidArgument("alpha must be a number or \"inf\"");
      return SolutionSpec(EllipticC3Half{0.0, true});
    }
    return SolutionSpec(EllipticC3Half{num(p, "alpha"), false});
  }
  if (tag == "power_liouville") {
    expect_keys(p, {"alpha", "a_abs"});
    return SolutionSpec(PowerLiouville{num(p, "alpha"), num(p, "a_abs")});
  }
  if (tag == "exp_liouville") {
    expect_keys(p, {"a_abs", "b1", "b2"});
    return SolutionSpec(ExpLiouville{num(p, "a_abs"), num(p, "b1"), num(p, "b2")});
  }
  if (tag == "exp_power_liouville") {
    expect_keys(p, {"k"});
    return SolutionSpec(ExpPowerLiouville{integer(p, "k")});
  }
  if (tag == "limit_pole") {
    expect_keys(p, {"sign"});
    return SolutionSpec(LimitPole{integer(p, "sign")});
  }
  if (tag == "euler_no_swirl") {
    expect_keys(p, {"c0", "c1", "c2", "sign"});
    return SolutionSpec(EulerNoSwirl{num(p, "c0"), num(p, "c1"), num(p, "c2"), integer(p, "sign")});
  }
  if (tag == "euler_ns") {
    expect_keys(p, {"a", "b"});
    return SolutionSpec(EulerNS{num(p, "a"), num(p, "b")});
  }
  if (tag == "special_global_c3m4") {
    expect_keys(p, {});
    return special_global_c3m4();
  }
  if (tag == "with_constant_swirl") {
    expect_keys(p, {"base", "C"});
    auto base = std::make_shared<const SolutionSpec>(spec_from_json(p.at("base")));
    return SolutionSpec(WithConstantSwirl{base, num(p, "C")});
  }
  throw InvalidArgument("unknown family '" + tag + "'");
}

json spec_to_json(const SolutionSpec &spec) {
  using namespace family;
  json params = std::visit(
      Overloaded{
          [](const Landau &f) { return json{{"sigma", f.sigma}}; },
          [](const NoSwirlOneSing &f) { return json{{"tau", f.tau}, {"sigma", f.sigma}}; },
          [](const TypeTwoLog &f) { return json{{"alpha", f.alpha}}; },
          [](const EllipticC3Half &f) {
            return f.infinite ? json{{"alpha", "inf"}} : json{{"alpha", f.alpha}};
          },
          [](const PowerLiouville &f) { return json{{"alpha", f.alpha}, {"a_abs", f.a_abs}}; },
          [](const ExpLiouville &f) { return json{{"a_abs", f.a_abs}, {"b1", f.b1}, {"b2", f.b2}}; },
          [](const ExpPowerLiouville &f) { return json{{"k", f.k}}; },
          [](const LimitPole &f) { return json{{"sign", f.sign}}; },
          [](const EulerNoSwirl &f) {
            return json{{"c0", f.c0}, {"c1", f.c1}, {"c2", f.c2}, {"sign", f.sign}};
          },
          [](const EulerNS &f) { return json{{"a", f.a}, {"b", f.b}}; },
          [](const SpecialGlobalC3m4 &) { return json::object(); },
          [](const WithConstantSwirl &f) { return json{{"base", spec_to_json(*f.base)}, {"C", f.swirl}}; },
      },
      spec.variant());
  return json{{"family", spec.tag()}, {"params", params}};
}


SingularityPrescription prescription_from_json(const json &j) {
  if (!j.is_object()) throw InvalidArgument("prescription must be an object");
  for (const auto &[k, v] : j.items())
    if (k != "points" && k != "exponents" && k != "basepoint") throw InvalidArgument("unknown field '" + k + "'");
  if (!j.contains("points") || !j.at("points").is_array()) throw InvalidArgument("prescription needs 'points'");
  if (!j.contains("exponents") || !j.at("exponents").is_array()) throw InvalidArgument("prescription needs 'exponents'");
  SingularityPrescription p;
  for (const json &pt : j.at("points")) {
    if (!pt.is_array() || pt.size() != 3 || !std::all_of(pt.begin(), pt.end(), [](const json &c) { return c.is_number(); }))
      throw InvalidArgument("each point must be [x, y, z]");
    const Vec3 v{pt[0].get<double>(), pt[1].get<double>(), pt[2].get<double>()};
    if (!(norm(v) > 0.0)) throw InvalidArgument("points must be nonzero");
    p.points.push_back(normalized(v));
  }
  for (const json &l : j.at("exponents")) {
    if (!l.is_number_integer()) throw InvalidArgument("exponents must be integers");
    p.exponents.push_back(l.get<int>());
  }
  if (j.contains("basepoint")) p.basepoint = complex_of(j.at("basepoint"), "basepoint");
  p.validate();
  return p;
}

json prescription_to_json(const SingularityPrescription &p) {
  json pts = json::array();
  for (const Vec3 &v : p.points) pts.push_back(vec_json(v));
  return json{{"points", pts},
              {"exponents", p.exponents},
              {"basepoint", json::array({p.basepoint.real(), p.basepoint.imag()})}};
}

ClosedForm closed_form_from_json(const json &j) {
  if (!j.is_object() || !j.contains("f") || !j.at("f").is_string())
    throw InvalidArgument("closed form needs a string 'f'");
  for (const auto &[k, v] : j.items())
    if (k != "f" && k != "params") throw InvalidArgument("unknown field '" + k + "'");
  const std::string f = j.at("f").get<std::string>();
  const json p = j.value("params", json::object());
  if (f == "power") {
    expect_keys(p, {"alpha", "a"});
    return generator::Power{num(p, "alpha"), complex_of(p.at("a"), "a")};
  }
  if (f == "exp") {
    expect_keys(p, {"a", "b"});
    return generator::Exp{complex_of(p.at("a"), "a"), complex_of(p.at("b"), "b")};
  }
  if (f == "exp_power") {
    expect_keys(p, {"k"});
    return generator::ExpPower{integer(p, "k")};
  }
  throw InvalidArgument("unknown generator '" + f + "'");
}

LiouvilleSolution liouville_from_json(const json &j) {
  if (j.is_object() && j.contains("f")) return LiouvilleSolution::closed_form(closed_form_from_json(j));
  return LiouvilleSolution::build(prescription_from_json(j));
}

json to_json(const ResidualReport &r) {
  return json{{"max_momentum", real(r.max_momentum)}, {"rms_momentum", real(r.rms_momentum)},
              {"max_divergence", real(r.max_divergence)}, {"max_relative", real(r.max_relative)},
              {"n_points", r.n_points}, {"excluded", r.excluded}};
}

json to_json(const SingularityReport &r) {
  return json{{"pole", vec_json(r.pole)},
              {"tau_hat", real(r.tau_hat)},
              {"eta_hat", r.eta_hat ? real(*r.eta_hat) : json(nullptr)},
              {"kappa_hat", real(r.kappa_hat)},
              {"sigma_hat", real(r.sigma_hat)},
              {"type", to_string(r.type)},
              {"confidence", real(r.confidence)},
              {"kappa_nonlinear", r.kappa_nonlinear},
              {"swirl", r.swirl ? json{{"constant", real(r.swirl->constant)},
                                       {"constant_rms", real(r.swirl->constant_rms)},
                                       {"log_slope", real(r.swirl->log_slope)},
                                       {"log_intercept", real(r.swirl->log_intercept)},
                                       {"log_rms", real(r.swirl->log_rms)}}
                                : json(nullptr)}};
}

json to_json(const GradientReport &r) {
  return json{{"q2", real(r.q2)}, {"q1", real(r.q1)}, {"type", to_string(r.type)}};
}

json to_json(const GrowthBound &r) {
  return json{{"K", real(r.K)}, {"saturation", real(r.saturation)}, {"trend", real(r.trend)}};
}

json to_json(const SlopeFit &r) {
  return json{{"point", vec_json(r.point)}, {"exponent", r.exponent}, {"slope", real(r.slope)},
              {"expected", real(r.expected)}, {"rms", real(r.rms)}, {"ok", r.ok}};
}

json to_json(const RegionProbe &r) {
  return json{{"c1", r.c1}, {"c2", r.c2}, {"c3", r.c3}, {"gamma_minus_hat", real(r.gamma_minus_hat)},
              {"gamma_plus_hat", real(r.gamma_plus_hat)}, {"bracket_width", real(r.bracket_width)}};
}

} // namespace hns
