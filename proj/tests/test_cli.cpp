#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "rankmin/instances.hpp"
#include "rankmin/trace_io.hpp"

namespace fs = std::filesystem;
using namespace rankmin;

namespace {

const std::string kCli = RANKMIN_CLI_PATH;

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rankmin_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("generate writes deterministic numbered instances") {
  TempDir tmp;
  const std::string a = (tmp.path / "a").string();
  const std::string b = (tmp.path / "b").string();
  REQUIRE(run("generate --n-points 8 --n-samples 10 --count 3 --seed 7 --out " + a) == 0);
  REQUIRE(run("generate --n-points 8 --n-samples 10 --count 3 --seed 7 --out " + b) == 0);
  for (int i = 0; i < 3; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "instance_%03d.txt", i);
    CHECK(fs::exists(fs::path(a) / name));
    CHECK(slurp(fs::path(a) / name) == slurp(fs::path(b) / name));
  }
  Instance inst = load_instance(fs::path(a) / "instance_000.txt");
  CHECK(inst.op.m() == 10);
  CHECK(inst.n() == 8);
}

TEST_CASE("generate with count 0 is a usage error") {
  TempDir tmp;
  CHECK(run("generate --count 0 --out " + tmp.path.string()) != 0);
}

TEST_CASE("solve writes a trace csv that the reader accepts") {
  TempDir tmp;
  const std::string dir = tmp.path.string();
  REQUIRE(run("generate --n-points 8 --n-samples 10 --count 1 --seed 3 --out " + dir) == 0);
  const std::string inst = dir + "/instance_000.txt";
  const std::string trace = dir + "/trace.csv";
  REQUIRE(run("solve " + inst + " --method fast-palm --max-iters 40 --out " + trace) == 0);
  const std::string text = slurp(trace);
  CHECK(write_csv(read_csv(text)) == text);
  auto rows = parse_trace_rows(text);
  CHECK(rows.size() >= 2);
  CHECK(rows.front().iter == 0);
}

TEST_CASE("solve on the penalty counterexample from its optimum stays put") {
  TempDir tmp;
  const fs::path inst_path = tmp.path / "penalty.txt";
  save_instance(counterexample_instances()[1], inst_path);
  const std::string trace = (tmp.path / "trace.csv").string();
  REQUIRE(run("solve " + inst_path.string() +
              " --rho 0.5 --rho-x 0 --init paper-optimum --max-iters 3 --newton-tol 1e-7 "
              "--tol-obj 0 --out " +
              trace) == 0);
  auto rows = parse_trace_rows(slurp(trace));
  REQUIRE(!rows.empty());
  CHECK(rows.front().f_rho == doctest::Approx(1.5).epsilon(1e-12));
  // the singleton feasible set limits iterate accuracy to ~sqrt(newton_tol)
  for (const auto& r : rows) CHECK(r.f_rho == doctest::Approx(1.5).epsilon(1e-3));
}

TEST_CASE("solve maps infeasible instances to exit code 2") {
  TempDir tmp;
  Instance bad;
  Vector b(1);
  b << -1;
  bad.op = AffineOperator(2, {{{0, 0, 1.0}}}, b);
  bad.meta.kind = InstanceKind::Generic;
  const fs::path path = tmp.path / "bad.txt";
  save_instance(bad, path);
  CHECK(run("solve " + path.string() + " --max-newton-iters 200000") == 2);
}

TEST_CASE("baseline method emits a single-row trace") {
  TempDir tmp;
  const std::string dir = tmp.path.string();
  REQUIRE(run("generate --n-points 8 --n-samples 10 --count 1 --seed 5 --out " + dir) == 0);
  const std::string trace = dir + "/base.csv";
  REQUIRE(run("solve " + dir + "/instance_000.txt --method baseline --out " + trace) == 0);
  auto rows = parse_trace_rows(slurp(trace));
  CHECK(rows.size() == 1);
}

TEST_CASE("compare writes per-instance rows plus an aggregate") {
  TempDir tmp;
  const std::string dir = tmp.path.string();
  REQUIRE(run("generate --n-points 8 --n-samples 12 --count 2 --seed 9 --out " + dir) == 0);
  const std::string table = dir + "/compare.csv";
  REQUIRE(run("compare " + dir + "/instance_000.txt " + dir + "/instance_001.txt --max-iters 30 --out " +
              table) == 0);
  auto cells = read_csv(slurp(table));
  REQUIRE(cells.size() == 4);  // header + 2 instances + mean
  CHECK(cells[0][0] == "instance");
  CHECK(cells[3][0] == "mean");
  CHECK(write_csv(cells) == slurp(table));
}

TEST_CASE("sweep emits one row per sample count") {
  TempDir tmp;
  const std::string out = (tmp.path / "sweep.csv").string();
  REQUIRE(run("sweep --n-points 8 --count 1 --from 10 --to 14 --step 2 --max-iters 20 --seed 2 "
              "--out " +
              out) == 0);
  auto cells = read_csv(slurp(out));
  REQUIRE(cells.size() == 4);  // header + 3 levels
  CHECK(cells[0][0] == "n_samples");
  CHECK(cells[1][0] == "10");
  CHECK(cells[3][0] == "14");
}
