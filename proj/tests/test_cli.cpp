#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "kahler/serialize.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " KAHLER_CV_PATH " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.out.append(buf.data(), n);
  }
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

kahler::Edif value_of(const std::string& args) {
  const Run r = run(args + " --json");
  REQUIRE(r.code == 0);
  return json::parse(r.out).at("value").get<kahler::Edif>();
}

bool near(const kahler::Edif& got, const kahler::Edif& want, double tol) {
  return kahler::distance(got, want) <= tol;
}

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("valuate") {
  // exact value of this valuation is -4 dxdy
  CHECK(near(value_of(R"~(valuate -e "1/(z*(z - pi/2))" --circle 0,0,1,ccw)~"), {0, -4}, 1e-10));
  CHECK(near(value_of(R"~(valuate -e "z^2" --circle 0,0,1,ccw)~"), {0, 0}, 1e-12));
  CHECK(near(value_of(R"~(valuate -e "1/z" --circle 0,0,2,cw)~"), {0, -2 * kPi}, 1e-12));
  CHECK(near(value_of(R"~(valuate -e "1/z" --polyline "-1,-1;1,-1;1,1;-1,1")~"), {0, 2 * kPi}, 1e-10));
  CHECK(near(value_of(R"~(valuate -e "1/z" --curve-json '{"kind":"circle","cx":0,"cy":0,"r":3}')~"),
             {0, 2 * kPi}, 1e-12));
}

TEST_CASE("cauchy and derivative") {
  CHECK(near(value_of(R"~(cauchy -e "exp(z)" --circle 0,0,1,ccw --at 0,0)~"), {1, 0}, 1e-12));
  CHECK(near(value_of(R"~(cauchy -e "1/(z - pi/2)" --circle 0,0,1,ccw --at 0,0)~"), {-2 / kPi, 0}, 1e-12));
  CHECK(near(value_of(R"~(cauchy -e "z^2" --circle 0,0,1,ccw --at 0.5,0)~"), {0.25, 0}, 1e-12));

  const kahler::Edif d = value_of(R"~(derivative -e "1/(z+I)^2" --at 0,1 --order 1 --circle 0,1,0.5,ccw)~");
  CHECK(near(kahler::Edif{0, 2 * kPi} * d, {kPi / 2, 0}, 1e-11));
  CHECK(near(value_of(R"~(derivative -e "z^3" --at 0.5,0 --order 2 --circle 0,0,1)~"), {3, 0}, 1e-11));
  CHECK(near(value_of(R"~(derivative -e "exp(z)" --at 0,0 --order 3 --circle 0,0,1)~"), {1, 0}, 1e-11));
}

TEST_CASE("residue, decompose, potential, goursat") {
  const Run r = run(R"~(residue -e "1/z" --pole 0,0 --radius 1 --json)~");
  REQUIRE(r.code == 0);
  const auto reports = json::parse(r.out).at("residues");
  REQUIRE(reports.size() == 1);
  CHECK(near(reports[0].at("residue").get<kahler::Edif>(), {1, 0}, 1e-12));

  const Run d = run(R"~(decompose -e "1/(z*(z-2))" --circle 0,0,5 --pole 0,0 --pole 2,0 --json)~");
  CHECK(d.code == 0);
  CHECK(json::parse(d.out).at("agrees") == true);

  CHECK(near(value_of(R"~(potential -e "2*z" --at 1,1)~"), {0, 2}, 1e-12));
  CHECK(near(value_of(R"~(potential -e "2*z" --from 0,0 --at 1,1 --polyline "0,0;1,0;1,1" --open)~"),
             {0, 2}, 1e-12));

  CHECK(run(R"~(goursat -e "exp(z)" --circle 0,0,1)~").code == 0);
  CHECK(run(R"~(goursat -e "1/z" --circle 0,0,1)~").code == 1);
}

TEST_CASE("check") {
  const Run ok = run(R"~(check -e "exp(z)" --grid -1,1,-1,1,5)~");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("shedif: true") != std::string::npos);
  const Run bad = run(R"~(check --raw-u "sqrt(x^2 + y^2)" --raw-v "0" --grid -1,1,-1,1,4)~");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("shedif: false") != std::string::npos);
  const Run conj = run(R"~(check --raw-u "x" --raw-v "-y" --json)~");
  CHECK(conj.code == 1);
  CHECK(json::parse(conj.out).at("shedif") == false);
}

TEST_CASE("exit codes") {
  CHECK(run(R"~(valuate -e "1/(z" --circle 0,0,1)~").code == 2);
  CHECK(run(R"~(valuate -e "z" --circle 0,0)~").code == 2);
  CHECK(run(R"~(valuate -e "z")~").code == 2);
  CHECK(run("bogus").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("--help").code == 0);
  CHECK(run(R"~(valuate -e "z" --circle 0,0,1 --rel-tol -1)~").code == 2);
  CHECK(run(R"~(valuate -e "1/z" --circle 1,0,1 --max-evals 20000)~").code == 3);
  CHECK(run(R"~(cauchy -e "1/(z-2)" --circle 0,0,2 --at 0,0 --max-evals 20000)~").code == 3);
  CHECK(run(R"~(cauchy -e "z" --circle 0,0,1 --at 3,0)~").code == 4);
  CHECK(run(R"~(valuate -e "z" --circle 0,0,-1)~").code == 4);
  CHECK(run(R"~(decompose -e "1/(z*(z-2))" --circle 0,0,5 --pole 0,0 --pole 2,0 --radius 1.5 --radius 1)~").code == 4);
}

TEST_CASE("tolerance from the environment") {
  const Run loose = run(R"~(valuate -e "exp(z)/(z - 0.9)" --circle 0,0,1 --json)~", "KAHLER_CV_TOL=1e-2");
  const Run tight = run(R"~(valuate -e "exp(z)/(z - 0.9)" --circle 0,0,1 --json)~");
  REQUIRE(loose.code == 0);
  REQUIRE(tight.code == 0);
  CHECK(json::parse(loose.out).at("integrand_evals") < json::parse(tight.out).at("integrand_evals"));
  // an explicit flag wins over the environment
  const Run flag = run(R"~(valuate -e "exp(z)/(z - 0.9)" --circle 0,0,1 --json --rel-tol 1e-10)~",
                       "KAHLER_CV_TOL=1e-2");
  CHECK(flag.out == tight.out);
}

TEST_CASE("output is deterministic and round-trips") {
  const std::string args = R"~(derivative -e "sin(z)/(z-3)" --at 0.2,0.1 --order 2 --circle 0,0,1 --json)~";
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const json j = json::parse(a.out);
  CHECK(json::parse(j.dump()) == j);
  CHECK(j.dump() + "\n" == a.out);
}

TEST_CASE("sample dump") {
  const std::string path = "cli_samples.csv";
  const Run r = run(R"~(valuate -e "1/z" --circle 0,0,1 --json --dump-samples )~" + path);
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "t,x,y,u,v");
  double prev = -1.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    std::stringstream row(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(row, cell, ',')) {
      v.push_back(std::stod(cell));
    }
    REQUIRE(v.size() == 5);
    CHECK(v[0] >= prev);
    prev = v[0];
    CHECK(std::abs(std::hypot(v[1], v[2]) - 1.0) <= 1e-15);
    // 1/z on the unit circle is the conjugate point
    CHECK(std::abs(v[3] - v[1]) <= 1e-15);
    CHECK(std::abs(v[4] + v[2]) <= 1e-15);
    ++rows;
  }
  CHECK(rows == json::parse(r.out).at("integrand_evals"));
  std::remove(path.c_str());
}
