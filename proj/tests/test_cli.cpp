#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string cli = CDPACK_CLI_PATH;

struct CliDir {
  fs::path path;
  CliDir() {
    path = fs::temp_directory_path() / "cdpack_cli_tests";
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~CliDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) {
  const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("cli exit codes distinguish failure classes", "[cli]") {
  CliDir dir;
  const std::string inst = dir.file("inst.json");
  REQUIRE(run("generate --n 3 --weight-lo 2 --weight-hi 4 --capacity 5 --seed 1 --out " +
              inst) == 0);

  CHECK(run("run --instance " + dir.file("missing.json") + " --out " + dir.file("r.json")) == 2);
  CHECK(run("run --instance " + inst + " --ansatz bogus --out " + dir.file("r.json")) == 3);
  CHECK(run("run --instance " + inst + " --stepsize 99 --out " + dir.file("r.json")) == 3);
  CHECK(run("run --instance " + inst + " --threshold 0.9999 --iterations 2 --trials 1 --out " +
            dir.file("r.json")) == 4);
  CHECK(run("frobnicate") == 3);
  CHECK(run("generate --n 3 --weight-lo 9 --weight-hi 9 --capacity 5 --out " +
            dir.file("bad.json")) == 2);
}

TEST_CASE("cli oracle prohibits over-cap partition requests", "[cli]") {
  CliDir dir;
  const std::string inst = dir.file("big.json");
  REQUIRE(run("generate --n 15 --weight-lo 1 --weight-hi 2 --capacity 4 --seed 1 --out " +
              inst) == 0);
  CHECK(run("oracle --instance " + inst + " --out " + dir.file("o.json")) == 3);
}

TEST_CASE("cli dumps are stable byte-for-byte", "[cli]") {
  CliDir dir;
  const std::string inst = dir.file("inst.json");
  REQUIRE(run("generate --n 3 --weight-lo 2 --weight-hi 4 --capacity 5 --seed 1 --out " +
              inst) == 0);
  const std::string base = "run --instance " + inst +
                           " --ansatz dcqaoa --iterations 2 --trials 1 --seed 7 --threshold 0 ";
  REQUIRE(run(base + "--out " + dir.file("r1.json") + " --dump-circuit " + dir.file("c1.txt") +
              " --dump-decomposition " + dir.file("d1.txt")) == 0);
  REQUIRE(run(base + "--out " + dir.file("r2.json") + " --dump-circuit " + dir.file("c2.txt") +
              " --dump-decomposition " + dir.file("d2.txt")) == 0);
  CHECK(slurp(dir.file("c1.txt")) == slurp(dir.file("c2.txt")));
  CHECK(slurp(dir.file("d1.txt")) == slurp(dir.file("d2.txt")));
  CHECK(slurp(dir.file("r1.json")) == slurp(dir.file("r2.json")));
  CHECK_FALSE(slurp(dir.file("c1.txt")).empty());
  // the dumped program starts with the first CD rotation of layer one
  CHECK(slurp(dir.file("c1.txt")).rfind("ROT YZI", 0) == 0);
}
