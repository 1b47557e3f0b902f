#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"

namespace {

const std::string kBin = QDL_CLI_PATH;
const std::string kData = QDL_DATA_DIR;

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  Run r;
  FILE* p = popen((kBin + " " + args + " 2>/dev/null").c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string data(const std::string& name) { return kData + "/" + name; }

}  // namespace

TEST_CASE("analyze exit codes") {
  CHECK(run("analyze " + data("flagship.json")).code == 0);
  CHECK(run("analyze " + data("negative_control.json")).code == 2);
  CHECK(run("analyze " + data("d4_s2.json")).code == 2);
  CHECK(run("analyze " + data("malformed.json")).code == 64);
  CHECK(run("analyze " + data("missing.json")).code == 64);
  CHECK(run("no-such-command").code == 64);
  CHECK(run("").code == 64);
  const auto j = nlohmann::json::parse(run("analyze --format json " + data("flagship.json")).out);
  CHECK(j.is_object());
}

TEST_CASE("reduce prints a verified certificate") {
  for (const char* f : {"flagship.json", "pair_d7.json"}) {
    const auto r = run(std::string("reduce ") + data(f));
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("verified") == true);
  }
}

TEST_CASE("verify-algebra") {
  CHECK(run("verify-algebra --params 1,1,1 --samples 10").code == 0);
  CHECK(run("verify-algebra --params 1,1").code == 64);
}

TEST_CASE("enumerate flagship at H = 3") {
  const auto r = run("enumerate " + data("flagship.json") + " --H 3");
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string line, last;
  std::size_t points = 0;
  while (std::getline(in, line))
    if (!line.empty()) {
      last = line;
      points += line[0] == '[';
    }
  const auto summary = nlohmann::json::parse(last).at("summary");
  CHECK(summary.at("count") == 889);
  CHECK(summary.at("exhaustive") == true);
  CHECK(points == 889);
}

TEST_CASE("density output is deterministic") {
  const std::string spec = std::string(QDL_BINARY_DIR) + "/cli_small_spec.json";
  auto problem = nlohmann::json::parse(slurp(data("flagship.json")));
  problem["experiment"]["heights"] = {2, 4, 8};
  std::ofstream(spec) << problem.dump(2);
  const std::string csv1 = std::string(QDL_BINARY_DIR) + "/cli_a.csv", csv2 = std::string(QDL_BINARY_DIR) + "/cli_b.csv";
  const auto a = run("density --spec " + spec + " --jobs 1 --csv " + csv1);
  const auto b = run("density --spec " + spec + " --jobs 3 --csv " + csv2);
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  CHECK(slurp(csv1) == slurp(csv2));

  std::istringstream in(slurp(csv1));
  std::string line;
  std::getline(in, line);
  CHECK(line == "H,points,coverage,max_gap");
  double prev = -1;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string h, pts, cov;
    std::getline(cells, h, ',');
    std::getline(cells, pts, ',');
    std::getline(cells, cov, ',');
    CHECK(std::stod(cov) >= prev);
    prev = std::stod(cov);
    ++rows;
  }
  CHECK(rows == 3);
}
