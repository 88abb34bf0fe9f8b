#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

// Runs the CLI in `dir` and captures combined output and the exit status.
RunResult run_cli(const fs::path& dir, const std::string& args) {
  std::string cmd = "cd '" + dir.string() + "' && '" + OSPH_CLI_PATH + "' " +
                    args + " 2>&1";
  std::array<char, 4096> buf{};
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe))
    r.output.append(buf.data(), got);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() /
                 ("osph-cli-" + tag + "-" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string cfg(const std::string& name) {
  return std::string(OSPH_CONFIG_DIR) + "/" + name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("check: spherical config exits 0 and writes both reports") {
  fs::path dir = fresh_dir("check");
  RunResult r = run_cli(dir, "check --config " + cfg("gl2_borel.json"));
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(fs::exists(dir / "report.txt"));
  CHECK(fs::exists(dir / ".sphericity-cache"));

  nlohmann::json rep = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep.at("overall").get<bool>());
  CHECK(rep.at("conclusive").get<bool>());
  CHECK(rep.at("orbits").size() == 2);
  CHECK(rep.at("kind") == "sphericity-check");

  // stdout carries the same text report that landed on disk
  CHECK(r.output == slurp(dir / "report.txt"));
  CHECK(r.output.find("(2)") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("check: cache hit reproduces the report byte for byte") {
  fs::path dir = fresh_dir("cache");
  std::string args = "check --config " + cfg("gl2_borel.json");
  RunResult first = run_cli(dir, args);
  REQUIRE(first.exit_code == 0);
  std::string cold = slurp(dir / "report.json");
  RunResult second = run_cli(dir, args);
  REQUIRE(second.exit_code == 0);
  CHECK(slurp(dir / "report.json") == cold);
  CHECK(first.output == second.output);
  fs::remove_all(dir);
}

TEST_CASE("check: not-spherical and vacuous configs map to their exit codes") {
  fs::path dir = fresh_dir("verdicts");
  // gl3 torus with chi = 0: regular orbit overshoots the bound
  RunResult fail = run_cli(dir, "check --config " + cfg("gl3_torus.json"));
  CHECK(fail.exit_code == 1);

  // traced character: every orbit certified empty, vacuously spherical
  RunResult vac = run_cli(dir, "check --config " + cfg("gl2_torus_twist_a.json"));
  CHECK(vac.exit_code == 0);
  CHECK(vac.output.find("empty") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("check: config errors exit 3 with diagnostics") {
  fs::path dir = fresh_dir("badcfg");
  RunResult missing = run_cli(dir, "check --config /does/not/exist.json");
  CHECK(missing.exit_code == 3);
  CHECK(missing.output.find("cannot open") != std::string::npos);

  RunResult bad = run_cli(dir, "check --config " + cfg("bad_chi.json"));
  CHECK(bad.exit_code == 3);
  CHECK(bad.output.find("chi([b_") != std::string::npos);

  RunResult nosub = run_cli(dir, "check --config " + cfg("bad_not_subalgebra.json"));
  CHECK(nosub.exit_code == 3);
  CHECK(nosub.output.find("[b_0, b_1]") != std::string::npos);

  // unknown flags are parse errors, also 3
  RunResult badflag = run_cli(dir, "check --config x --frobnicate");
  CHECK(badflag.exit_code == 3);

  RunResult badmode =
      run_cli(dir, "check --config " + cfg("gl2_borel.json") + " --mode turbo");
  CHECK(badmode.exit_code == 3);
  fs::remove_all(dir);
}

TEST_CASE("finiteness: verdict-based exit codes and finiteness.json") {
  fs::path dir = fresh_dir("finite");
  RunResult fin = run_cli(dir, "finiteness --config " + cfg("gl2_borel.json"));
  CHECK(fin.exit_code == 0);
  CHECK(fin.output.find("finite") != std::string::npos);
  nlohmann::json rep = nlohmann::json::parse(slurp(dir / "finiteness.json"));
  CHECK(rep.at("kind") == "finiteness-check");
  CHECK(rep.at("verdict") == "finite");

  RunResult inf = run_cli(dir, "finiteness --config " + cfg("gl4_nilline.json"));
  CHECK(inf.exit_code == 1);
  nlohmann::json irep = nlohmann::json::parse(slurp(dir / "finiteness.json"));
  CHECK(irep.at("verdict") == "infinite");

  // certified-empty Y counts as finite for the exit code
  RunResult empty = run_cli(dir, "finiteness --config " + cfg("gl2_torus_twist_a.json"));
  CHECK(empty.exit_code == 0);
  nlohmann::json erep = nlohmann::json::parse(slurp(dir / "finiteness.json"));
  CHECK(erep.at("verdict") == "empty-y");
  fs::remove_all(dir);
}

TEST_CASE("orbits: pure combinatorics on stdout") {
  fs::path dir = fresh_dir("orbits");
  RunResult r = run_cli(dir, "orbits --composition 2,1,1,1,1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("richardson orbit: (5,1)  dim 28") != std::string::npos);
  // one line per orbit in the closure
  CHECK(r.output.find("(3,3)") != std::string::npos);
  CHECK(r.output.find("(1,1,1,1,1,1)") != std::string::npos);

  RunResult single = run_cli(dir, "orbits --composition 4");
  CHECK(single.exit_code == 0);
  CHECK(single.output.find("(1,1,1,1)") != std::string::npos);

  RunResult n2 = run_cli(dir, "orbits --composition 1,1");
  CHECK(n2.exit_code == 0);
  CHECK(n2.output.find("(2)") != std::string::npos);

  RunResult bad = run_cli(dir, "orbits --composition 2,x");
  CHECK(bad.exit_code == 3);
  RunResult neg = run_cli(dir, "orbits --composition 0,2");
  CHECK(neg.exit_code == 3);
  fs::remove_all(dir);
}

TEST_CASE("check: seed and mode overrides change the stamped config") {
  fs::path dir = fresh_dir("override");
  RunResult base = run_cli(dir, "check --config " + cfg("gl2_borel.json"));
  REQUIRE(base.exit_code == 0);
  nlohmann::json rep = nlohmann::json::parse(slurp(dir / "report.json"));
  std::string base_hash = rep.at("config_hash");

  RunResult seeded =
      run_cli(dir, "check --config " + cfg("gl2_borel.json") + " --seed 99");
  REQUIRE(seeded.exit_code == 0);
  nlohmann::json rep2 = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep2.at("config_hash") != base_hash);
  CHECK(rep2.at("config").at("seed") == 99);

  RunResult modeswap =
      run_cli(dir, "check --config " + cfg("gl2_borel.json") + " --mode float");
  REQUIRE(modeswap.exit_code == 0);
  nlohmann::json rep3 = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(rep3.at("config").at("mode") == "float");
  fs::remove_all(dir);
}

TEST_CASE("cache directory honors the environment override") {
  fs::path dir = fresh_dir("cachedir");
  fs::path alt = dir / "alt-cache";
  std::string args = "SPHERICITY_CACHE_DIR='" + alt.string() + "' '" +
                     OSPH_CLI_PATH + "' check --config " + cfg("gl2_borel.json");
  std::string cmd = "cd '" + dir.string() + "' && " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
  CHECK(fs::exists(alt));
  CHECK(!fs::exists(dir / ".sphericity-cache"));
  fs::remove_all(dir);
}
