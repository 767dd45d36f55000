#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "bssn_cli_test";

int run(const std::string& args) {
  const std::string cmd = "BSSN_OUT_DIR='" + kWork.string() + "' '" BSSN_CLI_PATH "' " + args + " > '" +
                          (kWork / "stdout.txt").string() + "' 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Workdir {
  Workdir() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);
  }
};

} // namespace

TEST_CASE_FIXTURE(Workdir, "verify at zero coupling exits 0 and writes the report") {
  CHECK(run("verify --kappa 0") == 0);
  const auto j = nlohmann::json::parse(slurp(kWork / "verify.json"));
  CHECK(j["result"]["passed"] == true);
  CHECK(j["config"]["output"]["dir"] == kWork.string());
}

TEST_CASE_FIXTURE(Workdir, "usage and config errors exit 2") {
  CHECK(run("verify --no-such-flag") == 2);
  CHECK(run("") == 2);
  {
    std::ofstream(kWork / "bad.json") << "{\"kappa\": ";
  }
  CHECK(run("verify --config '" + (kWork / "bad.json").string() + "'") == 2);
  CHECK(slurp(kWork / "stdout.txt").find("parse error") != std::string::npos);
  CHECK(run("compare --quantity eq99") == 2);
  CHECK(run("verify --config /nonexistent/file.json") == 2);
}

TEST_CASE_FIXTURE(Workdir, "config file overrides flags") {
  {
    std::ofstream(kWork / "cfg.json") << R"({"quantity": "eq15", "kappa": "0:0.3:31"})";
  }
  CHECK(run("sweep --quantity eq16 --format csv --config '" + (kWork / "cfg.json").string() + "'") == 0);
  const std::string csv = slurp(kWork / "sweep.csv");
  CHECK(csv.find("eq16") == std::string::npos);
  CHECK(csv.find("eq15,nominal,0,0,0,0.5,") != std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 32);
}

TEST_CASE_FIXTURE(Workdir, "family reports a dimension discrepancy with exit 1") {
  CHECK(run("family --theta-bs 0.7") == 1);
  const auto j = nlohmann::json::parse(slurp(kWork / "family.json"));
  CHECK(j["result"]["nullspace_dimension"] == 3);
  CHECK(run("family --theta-bs 0.7 --drop-energy") == 0);
}

TEST_CASE_FIXTURE(Workdir, "compare prints a verdict line") {
  CHECK(run("compare --quantity eq16 --x 1 --y 1 --eta -0.7854 --kappa-grid 1e-3:3e-2:5") == 0);
  const std::string out = slurp(kWork / "stdout.txt");
  CHECK(out.find("eq16 nominal") != std::string::npos);
  CHECK(out.find("MISMATCH") != std::string::npos);
}
