#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(YAMABE3H_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string& name) { return std::string(YAMABE3H_DATA_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "yamabe3h_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(Cli, ValidatePentachoron) {
  const CliRun r = run("validate " + data("pentachoron.json"));
  EXPECT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_TRUE(doc["passed"]);
  EXPECT_TRUE(doc["degree_at_most_22"]);
  EXPECT_EQ(doc["max_degree"], 4);
}

TEST(Cli, ValidateCorruptedAndNonManifold) {
  const fs::path bad = scratch("corrupt.json");
  write(bad, "{\n  \"format\": \"yamabe3h-tri/1\",\n  \"vertex_count\": 5\n  \"tetrahedra\": []\n}\n");
  const CliRun r = run("validate " + bad.string());
  EXPECT_EQ(r.code, 3);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["line"], 4);
  EXPECT_TRUE(doc.contains("column"));

  const fs::path open = scratch("open.json");
  write(open, R"({"format":"yamabe3h-tri/1","vertex_count":5,"tetrahedra":[[1,2,3,4],[0,2,3,4],[0,1,3,4],[0,1,2,4]]})");
  const CliRun o = run("validate " + open.string());
  EXPECT_EQ(o.code, 1);
  const json od = json::parse(o.out);
  EXPECT_FALSE(od["triangles_paired"]);
  EXPECT_FALSE(od["failures"].empty());

  EXPECT_EQ(run("validate " + scratch("missing.json").string()).code, 3);
}

TEST(Cli, SolveRegular) {
  const CliRun r = run("solve_regular --degree 23");
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_NEAR(doc["t0"].get<double>(), 0.08370802977983863, 1e-10);
  EXPECT_LT(doc["residual"].get<double>(), 1e-12);

  const json d100 = json::parse(run("solve-regular --degree 100").out);
  EXPECT_GT(d100["t0"].get<double>(), doc["t0"].get<double>());

  const CliRun none = run("solve_regular --degree 22");
  EXPECT_EQ(none.code, 1);
  EXPECT_NE(none.out.find("no real or virtual ball packing"), std::string::npos);
  EXPECT_EQ(run("solve_regular --degree 0").code, 3);
  EXPECT_EQ(run("solve_regular --degree banana").code, 3);
  EXPECT_EQ(run("no_such_command").code, 3);
}

TEST(Cli, CurvatureAndEnergy) {
  const json k = json::parse(run("curvature " + data("pentachoron.json") + " --radii uniform:1").out);
  ASSERT_EQ(k["curvature"].size(), 5u);
  for (const auto& v : k["curvature"]) EXPECT_NEAR(v.get<double>(), 11.768346452506711, 1e-12);

  const json e = json::parse(run("energy " + data("pentachoron.json") + " --radii uniform:1 --hessian").out);
  EXPECT_EQ(e["s_rel"].get<double>(), 0.0);
  EXPECT_EQ(e["hessian"].size(), 5u);

  const fs::path packing = scratch("packing.json");
  write(packing, R"({"format":"yamabe3h-packing/1","radii":[0.001,10,10,10,10]})");
  EXPECT_EQ(run("energy " + data("pentachoron.json") + " --radii " + packing.string() + " --hessian").code, 3);
  const CliRun ok = run("energy " + data("pentachoron.json") + " --radii " + packing.string());
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(run("curvature " + data("pentachoron.json") + " --radii uniform:-1").code, 3);
  EXPECT_EQ(run("curvature " + data("pentachoron.json") + " --radii uniform:x").code, 3);
}

TEST(Cli, FlowOutputsAndManifest) {
  const fs::path csv = scratch("penta.csv");
  const CliRun r = run("flow " + data("pentachoron.json") + " --radii uniform:1 --out " + csv.string());
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc["status"], "decayed_to_zero");
  EXPECT_NEAR(doc["fitted_rate"].get<double>(), 4 * std::numbers::pi - 4 * (3 * std::acos(1.0 / 3) - std::numbers::pi), 0.05);

  const json manifest = json::parse(slurp(csv.string() + ".manifest.json"));
  EXPECT_EQ(manifest["command"], "flow");
  EXPECT_EQ(manifest["status"], "decayed_to_zero");
  EXPECT_EQ(manifest["outputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(manifest["inputs"][0]["sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(manifest["config"]["dt"], 1e-3);

  // Identical inputs, identical bytes, independent of thread count.
  const std::string first = slurp(csv), first_manifest = slurp(csv.string() + ".manifest.json");
  run("flow " + data("pentachoron.json") + " --radii uniform:1 --out " + csv.string());
  EXPECT_EQ(slurp(csv), first);
  EXPECT_EQ(slurp(csv.string() + ".manifest.json"), first_manifest);
  const std::string env = "YAMABE3H_THREADS=2 ";
  const std::string cmd = env + YAMABE3H_CLI + " flow " + data("pentachoron.json") + " --out " + csv.string() +
                          " > /dev/null";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_EQ(slurp(csv), first);

  const CliRun tiny = run("flow " + data("pentachoron.json") + " --t-max 0.001");
  EXPECT_EQ(json::parse(tiny.out)["status"], "t_max_reached");
  EXPECT_EQ(run("flow " + data("pentachoron.json") + " --dt -1").code, 3);
  EXPECT_EQ(run("flow " + data("pentachoron.json") + " --method euler").code, 3);
  const CliRun adaptive = run("flow " + data("sixteen_cell.json") + " --method dopri5 --radii uniform:0.5");
  EXPECT_EQ(json::parse(adaptive.out)["status"], "decayed_to_zero");
}

TEST(Cli, SelfcheckAndGenerate) {
  const CliRun r = run("selfcheck");
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(json::parse(r.out)["passed"]);
  EXPECT_EQ(run("generate pentachoron").out, slurp(data("pentachoron.json")));
  EXPECT_EQ(run("generate sixteen_cell").out, slurp(data("sixteen_cell.json")));
}

}  // namespace
