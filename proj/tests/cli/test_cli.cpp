#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(REARR_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  std::size_t got = 0;
  while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("verify two checks on the cone") {
  const Run r = run("verify --checks tres,teoA2 --families cone:n=2 --h 0.02");
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 2);
  CHECK(j[0]["id"] == "teoA2");
  CHECK(j[1]["id"] == "tres");
  CHECK(j[0]["pass"] == true);
}

TEST_CASE("identity suite over the whole corpus") {
  const Run r = run("verify --checks layer-cake --families all");
  CHECK(r.code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.size() == 7);
  for (const auto& o : j) CHECK(o["ratio"].get<double>() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a violated check exits 1") {
  // The one-dimensional constant is sharp, so zero slack leaves no room for
  // the discretization error.
  const Run r = run("verify --checks intermedia --families cone:n=1 --h 1/32 --slack 0");
  CHECK(r.code == 1);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["pass"] == false);
}

TEST_CASE("input errors exit 2") {
  CHECK(run("verify --checks nosuch --families cone:n=2").code == 2);
  CHECK(run("verify --checks tres --families sphere:n=2").code == 2);
  CHECK(run("verify --checks tres --families ''").code == 2);
  CHECK(run("verify --checks tres --families cone:n=2 --h 0").code == 2);
  CHECK(run("verify --checks tres --families cone:n=2 --h 1/2").code == 2);
  CHECK(run("verify --checks tres --families cone:n=2 --space Lq:2").code == 2);
  CHECK(run("verify --bogus").code == 2);
  CHECK(run("").code == 2);
  CHECK(run("export --checks tres,teoA2 --families cone:n=2").code == 2);
  CHECK(run("verify --checks tres --families cone:n=2 --output /nonexistent/dir/out.json").code == 2);
  CHECK(run("--help").code == 0);
}

TEST_CASE("output is byte identical across runs") {
  const std::string args = "verify --checks all --families 'cone:n=2;ball:n=2,delta=0.1'";
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(!a.out.empty());

  const Run c = run("verify --checks tres --families cone:n=2 --format csv");
  CHECK(c.code == 0);
  CHECK(c.out.rfind("id,family,", 0) == 0);
  CHECK(count_lines(c.out) == 2);
}

TEST_CASE("output file") {
  const std::string path = "cli_test_output.json";
  std::remove(path.c_str());
  const Run r = run("verify --checks tres --families cone:n=2 --output " + path);
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  const Run s = run("verify --checks tres --families cone:n=2");
  CHECK(slurp(path) == s.out);
  std::remove(path.c_str());
}

TEST_CASE("constants and export") {
  const Run c = run("constants --checks gn-weak --families 'ball:n=2,delta=0.2;0.1'");
  CHECK(c.code == 0);
  CHECK(c.out.rfind("check,family,empirical,bound,gap\n", 0) == 0);
  CHECK(count_lines(c.out) == 2);

  const Run e = run("export --checks tres --families cone:n=2");
  CHECK(e.code == 0);
  CHECK(e.out.rfind("t,lhs,rhs\n", 0) == 0);
  CHECK(count_lines(e.out) == 61);

  const Run z = run("export --checks tres --families cone:n=2,height=0");
  CHECK(z.code == 0);
  std::istringstream rows(z.out);
  std::string line;
  std::getline(rows, line);
  while (std::getline(rows, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    CHECK(line.substr(a + 1, b - a - 1) == "0");
  }
}
