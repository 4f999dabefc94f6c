#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "levysup/cli.hpp"

using levysup::run_cli;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

}  // namespace

TEST_CASE("marginal table on the example grid") {
  const auto r = run({"marginal", "--model", "bm", "--drift", "0", "--t", "1", "--grid", "0:4:401"});
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 402);
  CHECK(l[0] == "x,density");
  const auto comma = l[1].find(',');
  CHECK(std::stod(l[1].substr(comma + 1)) == doctest::Approx(0.7978845608).epsilon(1e-8));
  // x = 1: 2 phi(1)
  const auto c2 = l[101].find(',');
  CHECK(std::stod(l[101].substr(0, c2)) == doctest::Approx(1.0));
  CHECK(std::stod(l[101].substr(c2 + 1)) == doctest::Approx(0.4839414490).epsilon(1e-7));
}

TEST_CASE("identity report") {
  const auto r = run({"identity", "--check", "wiener-hopf", "--model", "cauchy", "--alpha", "1", "--beta", "1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["identity"] == "wiener-hopf");
  CHECK(j["pass"] == true);
  CHECK(j["residual"].get<double>() <= j["tolerance"].get<double>());
  CHECK(j["provenance"]["tool"] == "levysup");
  CHECK(j["provenance"].contains("quadrature"));
  const auto strict = run({"identity", "--check", "wiener-hopf", "--model", "bm", "--drift", "0.5", "--alpha", "2", "--tol", "0"});
  CHECK(strict.code == 1);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"marginal", "--model", "nope", "--grid", "0:1:3"}).code == 2);
  CHECK(run({"marginal", "--model", "cauchy", "--drift", "1", "--grid", "0:1:3"}).code == 2);
  CHECK(run({"marginal", "--model", "bm", "--grid", "1:0:3"}).code == 2);
  CHECK(run({"marginal", "--model", "bm", "--grid", "0:1:1"}).code == 2);
  CHECK(run({}).code == 2);
  // Model errors surface on stderr
  const auto r = run({"marginal", "--model", "stable", "--index", "3", "--grid", "0:1:3"});
  CHECK(r.code == 2);
  CHECK(!r.err.empty());
  // No entrance density on the irregular side
  CHECK(run({"density", "--kind", "entrance", "--model", "cpp", "--grid", "0:1:3"}).code == 2);
}

TEST_CASE("simulation output is reproducible") {
  const std::vector<std::string> a{"simulate", "--model", "cauchy", "--paths", "200", "--steps", "50",
                                   "--seed", "7", "--format", "csv"};
  const auto r1 = run(a);
  auto b = a;
  b.push_back("--workers");
  b.push_back("3");
  const auto r2 = run(b);
  REQUIRE(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(lines(r1.out).size() == 201);
  CHECK(lines(r1.out)[0] == "g_hat,sup_hat,terminal,n_steps,bridge_corrected");

  // The seed can come from the environment.
  ::setenv("LEVYSUP_SEED", "7", 1);
  auto c = a;
  c.erase(c.begin() + 7, c.begin() + 9);
  const auto r3 = run(c);
  ::unsetenv("LEVYSUP_SEED");
  CHECK(r3.out == r1.out);
  CHECK(run(c).out != r1.out);
}

TEST_CASE("validation reports") {
  const auto r = run({"validate", "--check", "atom", "--model", "cpp", "--drift", "-1", "--rate", "1",
                      "--jump-mean", "1", "--jump-sign", "1", "--paths", "20000", "--seed", "3"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["identity"] == "atom");
  CHECK(j["provenance"]["seed"] == 3);
  const auto m = run({"validate", "--check", "marginal", "--model", "bm", "--drift", "0.5", "--paths", "20000",
                      "--steps", "20", "--tol", "0.02"});
  CHECK(m.code == 0);
}
