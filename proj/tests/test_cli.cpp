#include <catch_amalgamated.hpp>

#include <pdmp/cli.hpp>
#include <pdmp/io.hpp>
#include <pdmp/oracle.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace pdmp;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pdmp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string path(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "pdmp_test_cli";
  fs::create_directories(dir);
  return (dir / name).string();
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("simulate smoke run with one jump") {
  const Run r = run({"simulate", "--n-jumps", "1", "--seed", "3", "--out", path("one.csv")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("transitions=1") != std::string::npos);
  CHECK(read_trajectory(path("one.csv")).records.size() == 2);
}

TEST_CASE("simulate then estimate with truth") {
  REQUIRE(run({"simulate", "--n-jumps", "20000", "--seed", "11", "--out", path("t.csv")}).code == kExitOk);
  const Run r = run({"estimate", "--traj", path("t.csv"), "--out", path("e.csv"), "--truth", "--plot",
                     path("e.dat")});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("wrote 128 rows") != std::string::npos);
  const EstimateTable t = read_estimate(path("e.csv"));
  REQUIRE(t.s.size() == 128);
  CHECK(t.s.front() == 0.05);
  CHECK(std::abs(t.s.back() - 0.75) < 1e-15);
  REQUIRE(t.f_true.size() == 128);
  for (std::size_t i = 0; i < t.s.size(); ++i) {
    CHECK(std::abs(t.f_true[i] - bench_exact_f(t.s[i])) <= 1e-10);
    CHECK(t.f_hat[i] >= 0.0);
  }
  CHECK(t.meta.at("seed") == "11");
  CHECK(fs::file_size(path("e.dat")) > 0);
}

TEST_CASE("identical inputs give identical files") {
  for (const char* tag : {"a", "b"}) {
    const std::string tr = path(std::string("det_") + tag + ".csv");
    REQUIRE(run({"simulate", "--n-jumps", "5000", "--seed", "21", "--out", tr}).code == kExitOk);
    REQUIRE(run({"estimate", "--traj", tr, "--out", path(std::string("det_est_") + tag + ".csv")}).code ==
            kExitOk);
  }
  CHECK(slurp(path("det_a.csv")) == slurp(path("det_b.csv")));
  CHECK(slurp(path("det_est_a.csv")) == slurp(path("det_est_b.csv")));
  run({"simulate", "--n-jumps", "5000", "--seed", "22", "--out", path("det_c.csv")});
  CHECK(slurp(path("det_a.csv")) != slurp(path("det_c.csv")));
}

TEST_CASE("oracle verdicts") {
  const Run bench = run({"oracle", "--model", "bench", "--triples", "30"});
  CHECK(bench.code == kExitOk);
  CHECK(bench.out.find("FAIL") == std::string::npos);
  const Run free = run({"oracle", "--model", "drift-free"});
  CHECK(free.code == kExitOk);
  CHECK(free.out.find("PASS conservation residual=0 ") != std::string::npos);
  const Run bad = run({"oracle", "--model", "bench-corrupt", "--triples", "5"});
  CHECK(bad.code == kExitFailure);
  CHECK(bad.out.find("FAIL hazard_envelope") != std::string::npos);
}

TEST_CASE("config file and flag precedence") {
  const std::string cfg = path("run.cfg");
  std::ofstream(cfg) << "# small run\nn-jumps = 10\nseed = 5\n";
  const Run a = run({"--config", cfg, "simulate", "--out", path("cfg.csv")});
  REQUIRE(a.code == kExitOk);
  const Trajectory t = read_trajectory(path("cfg.csv"));
  CHECK(t.records.size() == 11);
  CHECK(t.seed == 5);
  const Run b = run({"--config", cfg, "simulate", "--seed", "6", "--out", path("cfg.csv")});
  REQUIRE(b.code == kExitOk);
  CHECK(read_trajectory(path("cfg.csv")).seed == 6);
  std::ofstream(cfg) << "bogus = 1\n";
  CHECK(run({"--config", cfg, "simulate", "--out", path("cfg.csv")}).code == kExitUsage);
}

TEST_CASE("usage and validation errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"simulate", "--no-such-flag"}).code == kExitUsage);
  CHECK(run({"simulate", "--n-jumps", "10"}).code == kExitUsage);
  CHECK(run({"simulate", "--n-jumps", "many", "--out", path("x.csv")}).code == kExitUsage);
  CHECK(run({"simulate", "--model", "unknown", "--out", path("x.csv")}).code == kExitFailure);
  CHECK(run({"simulate", "--n-jumps", "0", "--out", path("x.csv")}).code == kExitFailure);
  std::ofstream(path("broken.csv")) << "i,z1,z2,z3,s,forced\n0,0,0,oops,0,0\n";
  const Run r = run({"estimate", "--traj", path("broken.csv"), "--out", path("x.csv")});
  CHECK(r.code == kExitFailure);
  CHECK(r.err.find("broken.csv:2:") != std::string::npos);
  CHECK(run({"estimate", "--traj", path("one.csv"), "--out", path("x.csv"), "--horizon", "0.9"}).code ==
        kExitFailure);
}
