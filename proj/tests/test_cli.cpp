#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef QCGAPS_CLI_PATH
#error "QCGAPS_CLI_PATH must point at the qcgaps executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("qcgaps_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

Run run(const std::string& args) {
  const fs::path out = scratch_dir() / "stdout.txt";
  const std::string cmd = std::string("\"") + QCGAPS_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("coeff subcommand") {
  const Run r = run("coeff --preset ab --w 0,0");
  CHECK(r.code == 0);
  CHECK(r.out.find("\"a_P\": 0.2463") != std::string::npos);
  CHECK(r.out.find("visible_density") != std::string::npos);

  const Run m = run("coeff --preset gh --w 1.7,0.6 --method folded");
  CHECK(m.code == 0);
  CHECK(m.out.find("0.1779") != std::string::npos);
}

TEST_CASE("exit codes") {
  CHECK(run("coeff --window '{\"type\":\"disc\",\"center\":[0,0],\"radius\":1}' --d 4").code == 1);
  CHECK(run("coeff --preset ab --w 0.1").code == 1);
  CHECK(run("coeff --preset ab --w 1.2,0.5 --method mahler").code == 2);
  CHECK(run("coeff --window '{\"type\":\"disc\",\"center\":[0,0],\"radius\":1}' --d 10").code == 2);
  CHECK(run("gaps --preset ab --w 0,0 --R 1e10").code == 3);
  CHECK(run("gaps --preset ab --w 0,0").code == 1);
  CHECK(run("no-such-command").code == 1);
}

TEST_CASE("gaps output is deterministic across threads and sectors") {
  const fs::path a = scratch_dir() / "a", b = scratch_dir() / "b";
  const std::string common = "gaps --preset tt --w 0.5,0.4 --R 150 --s 0,0.5,1,2,5 --h 0.25 ";
  const Run ra = run(common + "--threads 1 --sectors 1 --out " + a.string());
  const Run rb = run(common + "--threads 2 --sectors 5 --out " + b.string());
  REQUIRE(ra.code == 0);
  REQUIRE(rb.code == 0);
  CHECK(ra.out.find("N=") != std::string::npos);
  const std::string fg = slurp(a / "fg.csv");
  CHECK(fg.rfind("s,", 0) == 0);
  CHECK(fg == slurp(b / "fg.csv"));
  CHECK(slurp(a / "histogram.csv") == slurp(b / "histogram.csv"));
  CHECK(!slurp(a / "histogram.csv").empty());

  // empty grid still reports the summary
  CHECK(run("gaps --preset ab --w 0,0 --R 40 --s ''").code == 0);
}

TEST_CASE("extremal subcommand") {
  for (auto [d, n] : {std::pair{2, 5}, std::pair{3, 7}, std::pair{5, 3}}) {
    const Run r = run("extremal --d " + std::to_string(d));
    CHECK(r.code == 0);
    const auto folded = r.out.find("folded coefficients");
    REQUIRE(folded != std::string::npos);
    std::size_t lines = 0;
    for (std::size_t i = folded; i < r.out.size(); ++i) lines += r.out[i] == '\n';
    // one line per folded interval plus the heading and the ζ line
    CHECK(lines == static_cast<std::size_t>(n) + 2);
  }
  CHECK(run("extremal --d 10").code == 2);
}

TEST_CASE("points and quick verification") {
  const Run p = run("points --preset ab --w 0,0 --R 3");
  CHECK(p.code == 0);
  CHECK(p.out.rfind("a,b,c,d,x,y\n", 0) == 0);
  const Run v = run("verify --quick");
  CHECK(v.code == 0);
  CHECK(v.out.find("all criteria passed") != std::string::npos);
}
