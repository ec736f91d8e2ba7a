#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rock/cli.hpp"
#include "rock/error.hpp"
#include "rock/io.hpp"

namespace rock {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rock_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write_config(const nlohmann::json& j, const std::string& name = "cfg.json") {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(2);
    return p;
  }

  int run(const std::string& args) {
    const std::string cmd = std::string(ROCK_CLI_PATH) + " " + args + " > " + (dir_ / "stdout").string() +
                            " 2> " + (dir_ / "stderr").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string stderr_text() {
    std::ifstream in(dir_ / "stderr");
    return std::string(std::istreambuf_iterator<char>(in), {});
  }

  static nlohmann::json lorenz_config() {
    return {{"seed", 4},
            {"output_dir", "out"},
            {"dataset",
             {{"generator", {{"system", "lorenz63"}, {"n_traj", 4}, {"samples_per_traj", 61}}}}},
            {"model",
             {{"kind", "ode"},
              {"kernel", {{"family", "gaussian"}, {"scale", 8.0}}},
              {"lambda", 1e-6},
              {"p", 2},
              {"cut_length", 11}}}};
  }

  fs::path dir_;
};

TEST_F(CliTest, GenerateTrainEvaluateRoundTrip) {
  const fs::path cfg = write_config(lorenz_config());
  ASSERT_EQ(run("generate --config " + cfg.string()), 0) << stderr_text();
  ASSERT_EQ(run("train --config " + cfg.string()), 0) << stderr_text();
  ASSERT_EQ(run("evaluate --config " + cfg.string()), 0) << stderr_text();
  std::ifstream in(dir_ / "out" / "report.json");
  const nlohmann::json report = nlohmann::json::parse(in);
  EXPECT_TRUE(report.contains("err"));
  EXPECT_TRUE(report.contains("one_err"));
  EXPECT_EQ(report["model_size"], 4 * 6 * 2 * 3);
  EXPECT_EQ(report["config_hash"].get<std::string>().size(), 16u);
}

TEST_F(CliTest, TrainFromWrittenDataset) {
  const fs::path gen = write_config(lorenz_config());
  ASSERT_EQ(run("generate --config " + gen.string()), 0) << stderr_text();
  nlohmann::json j = lorenz_config();
  j["dataset"] = {{"path", "out/data"}};
  j["output_dir"] = "out2";
  const fs::path cfg = write_config(j, "cfg2.json");
  ASSERT_EQ(run("train --config " + cfg.string()), 0) << stderr_text();
  EXPECT_TRUE(fs::exists(dir_ / "out2" / "model.rock"));
}

TEST_F(CliTest, NonPositiveLambdaIsSchemaError) {
  nlohmann::json j = lorenz_config();
  j["model"]["lambda"] = 0.0;
  const fs::path cfg = write_config(j);
  EXPECT_EQ(run("train --config " + cfg.string()), 2);
  EXPECT_EQ(stderr_text().rfind("error: schema:", 0), 0u) << stderr_text();
  j["model"]["lambda"] = -1.0;
  EXPECT_EQ(run("train --config " + write_config(j).string()), 2);
}

TEST_F(CliTest, SchemaAndIoErrors) {
  nlohmann::json j = lorenz_config();
  j["model"]["bogus"] = 1;
  EXPECT_EQ(run("train --config " + write_config(j).string()), 2);
  j = lorenz_config();
  j["dataset"] = {{"path", "nope"}};
  EXPECT_EQ(run("train --config " + write_config(j).string()), 3);
  EXPECT_EQ(stderr_text().rfind("error: io:", 0), 0u);
  EXPECT_EQ(run("train --config " + (dir_ / "absent.json").string()), 3);
  EXPECT_EQ(run("frobnicate"), 2);
}

TEST_F(CliTest, MalformedCsvNamesLine) {
  fs::create_directories(dir_ / "d");
  std::ofstream(dir_ / "d" / "a.csv") << "t,x_1\n0,1\n1,?\n";
  nlohmann::json j = lorenz_config();
  j["dataset"] = {{"path", "d/a.csv"}};
  EXPECT_EQ(run("train --config " + write_config(j).string()), 3);
  EXPECT_NE(stderr_text().find("a.csv:3:"), std::string::npos) << stderr_text();
}

TEST_F(CliTest, ForecastMatchesInProcess) {
  const fs::path cfg = write_config(lorenz_config());
  ASSERT_EQ(run("train --config " + cfg.string()), 0) << stderr_text();
  ASSERT_EQ(run("forecast --config " + cfg.string() + " --x0 1.5,-2.25,21 --horizon 0.5 --dt 0.01"), 0)
      << stderr_text();
  const RockModel model = io::load_model(dir_ / "out" / "model.rock");
  const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(51, 0.0, 0.5);
  const Eigen::MatrixXd expected = forecast(model, Eigen::Vector3d(1.5, -2.25, 21.0), grid, Integrator::RK4);
  const Trajectory got = io::read_trajectory_csv(dir_ / "out" / "forecast.csv");
  EXPECT_EQ(got.xs, expected);
  EXPECT_EQ(got.ts, grid);
}

TEST_F(CliTest, RerunIsNoOpUnlessForced) {
  const fs::path cfg = write_config(lorenz_config());
  ASSERT_EQ(run("train --config " + cfg.string()), 0);
  const auto t0 = fs::last_write_time(dir_ / "out" / "model.rock");
  fs::last_write_time(dir_ / "out" / "model.rock", t0 - std::chrono::hours(1));
  const auto stale = fs::last_write_time(dir_ / "out" / "model.rock");
  ASSERT_EQ(run("train --config " + cfg.string()), 0);
  EXPECT_EQ(fs::last_write_time(dir_ / "out" / "model.rock"), stale);
  ASSERT_EQ(run("train --force --config " + cfg.string()), 0);
  EXPECT_NE(fs::last_write_time(dir_ / "out" / "model.rock"), stale);
  // A different seed is a different config.
  fs::last_write_time(dir_ / "out" / "model.rock", stale);
  ASSERT_EQ(run("train --seed 5 --config " + cfg.string()), 0);
  EXPECT_NE(fs::last_write_time(dir_ / "out" / "model.rock"), stale);
}

TEST_F(CliTest, SweepWritesLogAndModel) {
  nlohmann::json j = lorenz_config();
  j["dataset"]["generator"]["n_traj"] = 6;
  j["search"] = {{"kernels", {"gaussian"}}, {"lambdas", {1e-4, 1e-7}}, {"ps", {1, 2}}, {"cut_lengths", {11}}};
  const fs::path cfg = write_config(j);
  ASSERT_EQ(run("sweep --config " + cfg.string()), 0) << stderr_text();
  std::ifstream in(dir_ / "out" / "sweep_log.jsonl");
  int lines = 0;
  for (std::string line; std::getline(in, line);) {
    ++lines;
    EXPECT_TRUE(nlohmann::json::parse(line).contains("stage"));
  }
  EXPECT_GT(lines, 0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "model.rock"));
}

TEST_F(CliTest, PdeTrainAndForecast) {
  const nlohmann::json j = {
      {"output_dir", "pde"},
      {"dataset", {{"generator", {{"system", "heat1d"}, {"n_space", 64}, {"n_times", 40}, {"dt", 0.05}}}}},
      {"model",
       {{"kind", "pde"},
        {"features", {{"kind", "polynomial"}, {"max_order", 2}, {"degree", 1}}},
        {"lambda", 1e-10},
        {"coarsen", 1}}}};
  const fs::path cfg = write_config(j);
  ASSERT_EQ(run("train --config " + cfg.string()), 0) << stderr_text();
  ASSERT_EQ(run("evaluate --config " + cfg.string()), 0) << stderr_text();
  ASSERT_EQ(run("forecast --config " + cfg.string() + " --horizon 0.5 --dt 0.05"), 0) << stderr_text();
  const PdeModel m = io::load_pde_model(dir_ / "pde" / "model.rock");
  EXPECT_NEAR(m.alpha(3), 0.1, 0.005);
}

TEST(ConfigParsing, ExactlyOneDatasetSource) {
  nlohmann::json j = {{"dataset", {{"path", "a"}, {"generator", {{"system", "lorenz63"}}}}}};
  try {
    cli::parse_config(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::Schema);
  }
  EXPECT_THROW(cli::parse_config({{"model", {{"lambda", 1.0}}}}), Error);
}

TEST(ConfigParsing, HashIsCanonical) {
  const nlohmann::json a = nlohmann::json::parse(R"({"b":1,"a":[1,2]})");
  const nlohmann::json b = nlohmann::json::parse(R"({"a":[1,2],"b":1})");
  EXPECT_EQ(cli::config_hash(a), cli::config_hash(b));
  EXPECT_NE(cli::config_hash(a), cli::config_hash({{"a", 1}}));
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(cli::exit_code_for(ErrorCategory::Schema), 2);
  EXPECT_EQ(cli::exit_code_for(ErrorCategory::Io), 3);
  EXPECT_EQ(cli::exit_code_for(ErrorCategory::Divergence), 4);
  EXPECT_EQ(cli::exit_code_for(ErrorCategory::Shape), 1);
}

}  // namespace
}  // namespace rock
