#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"

namespace {

struct Run {
  int status;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SSQEC_BIN) + " " + args + " 2>&1";
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(cmd.c_str(), "r"), pclose);
  std::string out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, pipe.get())) out += buf;
  const int raw = pclose(pipe.release());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

std::string tmp(const std::string& name) { return ::testing::TempDir() + "cli_" + name; }

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& text) { std::ofstream(path) << text; }

}  // namespace

TEST(Cli, BuildCodeReportsParameters) {
  const auto r = run("build-code --seeds builtin:toric:3 --out " + tmp("t3.json"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("[[81, 3, 9, 3]]"), std::string::npos) << r.out;
  const auto j = nlohmann::json::parse(slurp(tmp("t3.json")));
  EXPECT_EQ(j.at("schema_version"), 1);
}

TEST(Cli, SimulateZeroNoise) {
  ASSERT_EQ(run("build-code --seeds builtin:toric:2 --out " + tmp("t2.json")).status, 0);
  write(tmp("zero.json"), R"({"p": [0.0], "N": 2, "trials": 20, "seed": 3})");
  const auto r = run("simulate --code " + tmp("t2.json") + " --config " + tmp("zero.json") + " --out " +
                     tmp("zero.csv") + " --json " + tmp("zero_out.json") + " --threads 2");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto csv = slurp(tmp("zero.csv"));
  EXPECT_NE(csv.find("L,p,q,N,trials,failures"), std::string::npos);
  EXPECT_NE(csv.find("\n2,0,0,2,20,0,0,0,0,0,0"), std::string::npos) << csv;
  const auto j = nlohmann::json::parse(slurp(tmp("zero_out.json")));
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("seed"), 3);
}

TEST(Cli, SimulateIsDeterministicAcrossThreads) {
  ASSERT_EQ(run("build-code --seeds builtin:toric:2 --out " + tmp("t2d.json")).status, 0);
  write(tmp("noisy.json"), R"({"p": [0.05, 0.1], "N": 2, "trials": 50, "min_failures": 5, "max_trials": 200})");
  const std::string base = "simulate --code " + tmp("t2d.json") + " --config " + tmp("noisy.json") + " --seed 8";
  ASSERT_EQ(run(base + " --threads 1 --out " + tmp("a.csv")).status, 0);
  ASSERT_EQ(run(base + " --threads 4 --out " + tmp("b.csv")).status, 0);
  EXPECT_EQ(slurp(tmp("a.csv")), slurp(tmp("b.csv")));
}

TEST(Cli, ConfinementCheck) {
  ASSERT_EQ(run("build-code --seeds builtin:toric:3 --out " + tmp("t3c.json")).status, 0);
  const auto r = run("confinement-check --code " + tmp("t3c.json") + " --t 3 --f cubic --out " + tmp("conf.json"));
  EXPECT_EQ(r.status, 0) << r.out;
  EXPECT_NE(r.out.find("verified: true"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(tmp("conf.json")));
  EXPECT_EQ(j.at("verified"), true);
  EXPECT_EQ(j.at("schema_version"), 1);
  const auto z = run("confinement-check --code " + tmp("t3c.json") + " --t 1 --f zero --out " + tmp("conf0.json"));
  EXPECT_NE(z.out.find("verified: false"), std::string::npos);
}

TEST(Cli, LatticeExport) {
  ASSERT_EQ(run("build-code --seeds builtin:surface:3 --out " + tmp("s3.json")).status, 0);
  ASSERT_EQ(run("lattice-export --code " + tmp("s3.json") + " --out " + tmp("lat.json")).status, 0);
  const auto j = nlohmann::json::parse(slurp(tmp("lat.json")));
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_EQ(j.at("qubits").size(), 51u);
}

TEST(Cli, FitThresholdFromCsv) {
  std::ostringstream csv;
  csv << "L,p,q,N,trials,failures,p_fail,ci95,cause_logical,cause_metacode,cause_unmatchable\n";
  for (int L : {4, 5, 6})
    for (int i = 0; i < 5; ++i) {
      const double p = 0.19 + 0.01 * i;
      const double x = (p - 0.215) * L;
      const long f = std::lround((0.3 + 1.5 * x + 2 * x * x) * 100000);
      csv << L << ',' << p << ',' << 0 << ",0,100000," << f << ",0,0," << f << ",0,0\n";
    }
  write(tmp("fit.csv"), csv.str());
  const auto r = run("fit --kind threshold --in " + tmp("fit.csv") + " --out " + tmp("fit.json") + " --bootstrap 20");
  ASSERT_EQ(r.status, 0) << r.out;
  const auto j = nlohmann::json::parse(slurp(tmp("fit.json")));
  EXPECT_EQ(j.at("schema_version"), 1);
  EXPECT_NEAR(j.at("parameters").at("p_th").at("value").get<double>(), 0.215, 1e-3);
}

TEST(Cli, ErrorsExitNonZero) {
  write(tmp("bad.json"), R"({"p": [0.1], "colour": 1})");
  ASSERT_EQ(run("build-code --seeds builtin:toric:2 --out " + tmp("t2e.json")).status, 0);
  const auto r = run("simulate --code " + tmp("t2e.json") + " --config " + tmp("bad.json") + " --out " + tmp("x.csv"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("colour"), std::string::npos) << r.out;
  EXPECT_EQ(run("no-such-command").status, 1);
  EXPECT_EQ(run("build-code --seeds builtin:klein:3 --out " + tmp("k.json")).status, 1);
  EXPECT_EQ(run("fit --kind banana --in " + tmp("fit.csv") + " --out " + tmp("f.json")).status, 1);

  // A tampered code file is a consistency error.
  auto code = nlohmann::json::parse(slurp(tmp("t2e.json")));
  code["params"]["k"] = 7;
  write(tmp("tampered.json"), code.dump());
  EXPECT_EQ(run("lattice-export --code " + tmp("tampered.json") + " --out " + tmp("l.json")).status, 2);
}
