#include "doctest.h"

#include "json.hpp"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string out;
};

fs::path workdir() {
  static const fs::path d = [] {
    fs::path p = fs::temp_directory_path() / "hns_cli_test";
    fs::create_directories(p);
    return p;
  }();
  return d;
}

std::string file_with(const std::string &name, const std::string &text) {
  const fs::path p = workdir() / name;
  std::ofstream(p) << text;
  return p.string();
}

Run run(const std::string &args) {
  const std::string cmd = std::string(HNS_CLI) + " " + args + " 2>" + (workdir() / "stderr.txt").string();
  FILE *pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string last_stderr() {
  std::ifstream in(workdir() / "stderr.txt");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count_lines(const std::string &s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

} // namespace

TEST_CASE("eval") {
  const std::string landau = file_with("landau.json", R"({"family": "landau", "params": {"sigma": 0.5}})");
  const Run r = run("eval " + landau + " --grid-ntheta 3 --grid-nphi 1");
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 4);
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  CHECK(line == "theta,phi,u_r,u_theta,u_phi,p");
  std::getline(is, line);
  std::getline(is, line);
  CHECK(line.rfind("1.5707963267948966e+00,", 0) == 0);
  CHECK(line.find(",6.666666666666") != std::string::npos);

  CHECK(run("eval " + landau + " --grid-ntheta 0 --grid-nphi 1").out == "theta,phi,u_r,u_theta,u_phi,p\n");

  const std::string t2 = file_with("t2.json", R"({"family": "type_two_log", "params": {"alpha": 0}})");
  const Run d = run("eval " + t2 + " --grid-ntheta 6 --grid-nphi 1");
  CHECK(d.code == 0);
  CHECK(count_lines(d.out) == 4);
  CHECK(json::parse(last_stderr())["omitted"] == 3);

  // identical configuration, identical bytes
  CHECK(run("eval " + landau + " --seed 5").out == run("eval " + landau + " --seed 5").out);
  CHECK(run("eval " + landau + " --seed 5").out != run("eval " + landau).out);
}

TEST_CASE("verify") {
  const std::string landau = file_with("landau.json", R"({"family": "landau", "params": {"sigma": 0.5}})");
  const Run r = run("verify " + landau);
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["pass"] == true);

  const std::string e = file_with("ens.json", R"({"family": "euler_no_swirl", "params": {"c0": 1, "c1": 0, "c2": 1, "sign": 1}})");
  CHECK(run("verify " + e).code == 1);
  CHECK(run("verify " + e + " --euler").code == 0);

  const std::string bad = file_with("bad.json", "{\"family\": ");
  CHECK(run("verify " + bad).code == 2);
  CHECK(json::parse(last_stderr())["error"] == "input");
  CHECK(run("verify /nonexistent/x.json").code == 2);
  CHECK(run("frobnicate").code == 2);
}

TEST_CASE("classify") {
  const std::string n = file_with("n2.json", R"({"family": "no_swirl_one_sing", "params": {"tau": 0.5, "sigma": 0.1}})");
  const Run r = run("classify " + n + " --pole S");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["type"] == "Type3");
  CHECK(std::abs(j["tau_hat"].get<double>() - 0.5) < 1e-3);

  const std::string t2 = file_with("t2.json", R"({"family": "type_two_log", "params": {"alpha": 0}})");
  CHECK(run("classify " + t2 + " --pole N").code == 3);
  CHECK(run("classify " + n + " --pole 1,2").code == 2);
}

TEST_CASE("liouville") {
  const std::string p2 = file_with("p2.json", R"({"points": [[0, 0, -1], [0, 0, 1]], "exponents": [2, -2]})");
  const std::string rep = (workdir() / "rep.json").string();
  const Run r = run("liouville " + p2 + " --grid-ntheta 4 --grid-nphi 4 --report " + rep);
  CHECK(r.code == 0);
  CHECK(count_lines(r.out) == 17);
  json j;
  std::ifstream(rep) >> j;
  REQUIRE(j["slopes"].size() == 2);
  for (const json &s : j["slopes"]) CHECK(std::abs(s["slope"].get<double>() - 2.0) < 0.06);

  const std::string p3 = file_with(
      "p3.json", R"({"points": [[0.3, 0.5, 0.8], [-0.6, 0.2, -0.4], [0.1, -0.9, 0.2]], "exponents": [2, 2, -3]})");
  CHECK(run("liouville " + p3 + " --grid-ntheta 2 --grid-nphi 2 --report " + rep).code == 0);
  std::ifstream(rep) >> j;
  const double expected[] = {2.0, 2.0, 4.0};
  for (int i = 0; i < 3; ++i) CHECK(std::abs(j["slopes"][i]["slope"].get<double>() - expected[i]) < 0.03 * expected[i]);

  const std::string bad = file_with("sum.json", R"({"points": [[0, 0, -1], [0, 0, 1]], "exponents": [2, -3]})");
  CHECK(run("liouville " + bad).code == 2);
}

TEST_CASE("gamma-bounds and ode") {
  const Run r = run("gamma-bounds 0 0 0");
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["gamma_minus_hat"].get<double>() + 2) < 0.05);
  CHECK(std::abs(j["gamma_plus_hat"].get<double>() - 2) < 0.05);
  CHECK(run("gamma-bounds 0 0 -5").code == 2);

  const Run o = run("ode --gamma 1");
  CHECK(o.code == 0);
  const auto at = o.out.find("\n5.0000000000000000e-01,");
  REQUIRE(at != std::string::npos);
  CHECK(std::stod(o.out.substr(at + 24, 24)) == doctest::Approx(0.6).epsilon(1e-9));
}
