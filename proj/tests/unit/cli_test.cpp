#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("heatbath_cli_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = std::string(HEATBATH_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, CoupleCapacitor) {
  const fs::path out = scratch("couple");
  ASSERT_EQ(run("couple --foster \"k0=1\" --out " + out.string()), 0);
  const json r = load(out / "couple.json");
  EXPECT_EQ(r["gamma_eigs"], json::parse("[[-1.0, 0.0]]"));
  EXPECT_EQ(r["K_pretty"], "(1 - s)/(1 + s)");
  const json s = load(out / "summary.json");
  EXPECT_EQ(s["command"], "couple");
  EXPECT_TRUE(s["passed"].get<bool>());
}

TEST(Cli, LatticeIsDeterministic) {
  const fs::path a = scratch("lat_a"), b = scratch("lat_b");
  const std::string args = "lattice --M 2000 --c 1 --beta 1 --seed 7 --t-max 20 --bath-t-max 50 --out ";
  ASSERT_EQ(run(args + a.string()), 0);
  ASSERT_EQ(run(args + b.string()), 0);
  for (const char* f : {"particle.csv", "lattice.json", "periodicity.json", "summary.json"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST(Cli, InvertFirstOrderDensity) {
  const fs::path out = scratch("invert");
  ASSERT_EQ(run("invert --phi \"1;1 0 -1\" --out " + out.string()), 0);
  EXPECT_EQ(load(out / "invert.json")["Z0"]["pretty"], "1/s");
}

TEST(Cli, ImproperDensityFails) {
  const fs::path out = scratch("invert_bad");
  EXPECT_EQ(run("invert --phi \"1;1\" --out " + out.string()), 1);
}

TEST(Cli, ConfigFileAndOverride) {
  const fs::path out = scratch("config");
  write(out / "run.ini", "seed = 5\nout = \"" + (out / "run").string() + "\"\n[mb-stats]\nn = 20000\nkT = 2.0\n");
  ASSERT_EQ(run("--config " + (out / "run.ini").string() + " mb-stats --n 30000"), 0);
  const json s = load(out / "run" / "summary.json");
  EXPECT_EQ(s["seed"], 5);
  EXPECT_EQ(s["params"]["n"], 30000);
  EXPECT_EQ(s["params"]["kT"], 2.0);
}

TEST(Cli, UnknownKeyAbortsBeforeRunning) {
  const fs::path out = scratch("strict");
  write(out / "bad.ini", "out = \"" + (out / "run").string() + "\"\n[mb-stats]\nsamples = 10\n");
  EXPECT_EQ(run("--config " + (out / "bad.ini").string()), 2);
  EXPECT_FALSE(fs::exists(out / "run"));
  EXPECT_EQ(run("mb-stats --bogus 1 --out " + (out / "run").string()), 2);
  EXPECT_FALSE(fs::exists(out / "run"));
}

TEST(Cli, InvalidParameterIsUsageError) {
  const fs::path out = scratch("domain");
  EXPECT_EQ(run("line-sim --dx -1 --out " + out.string()), 2);
  EXPECT_EQ(run("line-sim --far-end sideways --out " + out.string()), 2);
}

TEST(Cli, ReportMergesAndFlags) {
  const fs::path root = scratch("report");
  fs::create_directories(root / "good");
  fs::create_directories(root / "bad");
  write(root / "good" / "summary.json",
        R"({"command":"synth","seed":0,"passed":true,"checks":[{"id":"C2","name":"a","passed":true,"value":0,"threshold":1},{"id":"C10","name":"b","passed":true,"value":0,"threshold":1}]})");
  write(root / "bad" / "summary.json",
        R"({"command":"invert","seed":0,"passed":false,"checks":[{"id":"C10","name":"round trip","passed":false,"value":1,"threshold":0}]})");
  const std::string good = (root / "good").string(), bad = (root / "bad").string();
  EXPECT_EQ(run("report " + good + " --out " + (root / "r1").string()), 0);
  const json r1 = load(root / "r1" / "report.json");
  EXPECT_EQ(r1["criteria"][0]["id"], "C2");
  EXPECT_EQ(r1["criteria"][1]["id"], "C10");
  EXPECT_EQ(run("report " + good + " " + bad + " --out " + (root / "r2").string()), 1);
  const json r2 = load(root / "r2" / "report.json");
  EXPECT_EQ(r2["criteria"][1]["failed"][0], "round trip");
  EXPECT_EQ(run("report " + good + " " + (root / "nothing").string()), 1);
  EXPECT_EQ(run("report"), 2);
}
