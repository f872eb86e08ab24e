#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sphere_fv_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  // Runs the tool; returns the exit status and captures stdout + stderr.
  int run(const std::string& args, const std::string& env = "") {
    const fs::path log = dir_ / "log.txt";
    const std::string cmd = env + " " + SPHERE_FV_EXE + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::ostringstream s;
    s << in.rdbuf();
    output_ = s.str();
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
  std::string output_;
};

const char* kSmall =
    "mesh.n_bands = 8\nmesh.n_lon_equator = 16\nflux.kind = burgers\nflux.axis = 1 1 1\n"
    "init.kind = gaussian_bump\ntime.t_end = 0.5\ntime.n_outputs = 2\n";

}  // namespace

TEST_F(Cli, RunWritesStatesAndDiagnostics) {
  const auto cfg = write_config("a.cfg", kSmall);
  ASSERT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0) << output_;
  for (const char* f : {"state_0.csv", "state_1.csv", "state_2.csv", "diagnostics.csv", "mesh.csv", "config.echo"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
  EXPECT_FALSE(fs::exists(dir_ / "out" / "INCOMPLETE"));
  const std::string state = slurp(dir_ / "out" / "state_0.csv");
  EXPECT_EQ(state.substr(0, state.find('\n')), "cell_id,lambda_center,phi_center,u");
}

TEST_F(Cli, ConstantDataGivesIdenticalStates) {
  const auto cfg = write_config("c.cfg",
                                "mesh.n_bands = 8\nmesh.n_lon_equator = 16\nflux.kind = trig\nflux.axis = 1 2 3\n"
                                "init.kind = constant\ninit.value = 0.3\ntime.n_outputs = 3\nscheme.order = 2\n");
  ASSERT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0) << output_;
  const std::string first = slurp(dir_ / "out" / "state_0.csv");
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(slurp(dir_ / "out" / ("state_" + std::to_string(k) + ".csv")), first);
}

TEST_F(Cli, DeterministicAcrossRunsAndThreads) {
  const auto cfg = write_config("a.cfg", kSmall);
  ASSERT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "one").string()), 0);
  ASSERT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "two").string()), 0);
  ASSERT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "par").string(), "SPHEREFV_THREADS=4"), 0);
  for (const char* f : {"state_2.csv", "diagnostics.csv", "mesh.csv"}) {
    EXPECT_EQ(slurp(dir_ / "one" / f), slurp(dir_ / "two" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "one" / f), slurp(dir_ / "par" / f)) << f;
  }
}

TEST_F(Cli, EchoedConfigReproducesOutputs) {
  const auto cfg = write_config("a.cfg", std::string(kSmall) + "output.directory = " + (dir_ / "first").string() + "\n");
  ASSERT_EQ(run("run --config " + cfg.string()), 0);
  const fs::path echo = dir_ / "first" / "config.echo";
  ASSERT_EQ(run("run --config " + echo.string() + " --out " + (dir_ / "second").string()), 0);
  for (const char* f : {"state_0.csv", "state_2.csv", "diagnostics.csv", "mesh.csv"}) {
    EXPECT_EQ(slurp(dir_ / "first" / f), slurp(dir_ / "second" / f)) << f;
  }
}

TEST_F(Cli, ConfigErrorsWriteNothing) {
  EXPECT_EQ(run("run --config " + (dir_ / "missing.cfg").string() + " --out " + (dir_ / "out").string()), 2);
  const auto bad = write_config("bad.cfg", "mesh.n_bands = 9\n");
  EXPECT_EQ(run("run --config " + bad.string() + " --out " + (dir_ / "out").string()), 2);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  EXPECT_EQ(run("frobnicate --config " + bad.string()), 2);
  const auto lin = write_config("lin.cfg", "flux.kind = burgers\n");
  EXPECT_EQ(run("converge --config " + lin.string() + " --out " + (dir_ / "out").string()), 2);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(Cli, RuntimeErrorFlagsPartialOutput) {
  // u^2 overflows, the fluxes become NaN in the first step.
  const auto cfg = write_config("nan.cfg",
                                "mesh.n_bands = 8\nmesh.n_lon_equator = 16\nflux.kind = burgers\n"
                                "flux.axis = 1 1 1\ninit.amplitude = 1e300\n");
  EXPECT_EQ(run("run --config " + cfg.string() + " --out " + (dir_ / "out").string()), 3) << output_;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "INCOMPLETE"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "state_0.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "state_1.csv"));
}

TEST_F(Cli, CheckCompat) {
  const auto good = write_config("g.cfg", kSmall);
  EXPECT_EQ(run("check-compat --config " + good.string()), 0);
  EXPECT_NE(output_.find("worst_cell"), std::string::npos);
  EXPECT_NE(output_.find("worst_u"), std::string::npos);
  const auto bad = write_config("b.cfg", std::string(kSmall) + "flux.perturbation = 0.01\n");
  EXPECT_EQ(run("check-compat --config " + bad.string()), 1);
  EXPECT_NE(output_.find("NOT compatible"), std::string::npos);
}

TEST_F(Cli, ConvergeWritesTable) {
  const auto cfg = write_config("c.cfg", "init.kappa = 0.5\ntime.t_end = 0.5\n");
  ASSERT_EQ(run("converge --config " + cfg.string() + " --resolutions 8x16,16x32 --out " + (dir_ / "out").string()), 0)
      << output_;
  const std::string table = slurp(dir_ / "out" / "convergence.csv");
  EXPECT_EQ(table.substr(0, table.find('\n')), "resolution,l1_error,observed_order");
  EXPECT_NE(table.find("16x32,"), std::string::npos);
}

TEST_F(Cli, TorusConstantDataHasZeroError) {
  const auto cfg = write_config("t.cfg", "torus.init = constant\ntorus.value = 0.4\ntorus.resolutions = 16,32\n");
  ASSERT_EQ(run("torus --config " + cfg.string() + " --out " + (dir_ / "out").string()), 0) << output_;
  std::ifstream in(dir_ / "out" / "torus_errors.csv");
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "N,l1_error,observed_order");
  while (std::getline(in, line)) {
    const double err = std::stod(line.substr(line.find(',') + 1));
    EXPECT_LE(err, 1e-12);
  }
  EXPECT_TRUE(fs::exists(dir_ / "out" / "torus_N32.csv"));
}

TEST_F(Cli, TorusRejectsNonConvexFlux) {
  const auto cfg = write_config("t.cfg", "torus.flux = cubic\n");
  EXPECT_EQ(run("torus --config " + cfg.string() + " --out " + (dir_ / "out").string()), 2);
  EXPECT_NE(output_.find("ConvexityViolation"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}
