#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "rock/dynamics.hpp"
#include "rock/error.hpp"
#include "rock/io.hpp"

namespace rock {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rock_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path dir_;
};

TEST_F(IoTest, TrajectoryCsvRoundTripIsExact) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n(0.0, 1e3);
  Trajectory t;
  t.ts = Eigen::VectorXd::LinSpaced(7, 0.1, 0.7);
  t.xs.resize(3, 7);
  for (Eigen::Index k = 0; k < t.xs.size(); ++k) t.xs.data()[k] = n(rng) / 7.0;
  io::write_trajectory_csv(dir_ / "t.csv", t);
  const Trajectory back = io::read_trajectory_csv(dir_ / "t.csv");
  EXPECT_EQ(back.ts, t.ts);
  EXPECT_EQ(back.xs, t.xs);
  std::ifstream in(dir_ / "t.csv");
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x_1,x_2,x_3");
}

TEST_F(IoTest, MalformedCsvReportsLine) {
  std::ofstream(dir_ / "bad.csv") << "t,x_1\n0,1\n0.1,abc\n";
  try {
    io::read_trajectory_csv(dir_ / "bad.csv");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::Io);
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
  std::ofstream(dir_ / "ragged.csv") << "t,x_1\n0,1,2\n";
  EXPECT_THROW(io::read_trajectory_csv(dir_ / "ragged.csv"), Error);
  EXPECT_THROW(io::read_trajectory_csv(dir_ / "missing.csv"), Error);
}

TEST_F(IoTest, DatasetRoundTrip) {
  GenerateOptions o;
  o.n_traj = 3;
  o.samples_per_traj = 20;
  const TrajectorySet data = generate(SystemSpec::with_defaults(SystemName::Rossler), o);
  const auto manifest = io::write_dataset(dir_ / "ds", data, {{"note", "x"}});
  EXPECT_EQ(manifest["files"].size(), 3u);
  const TrajectorySet back = io::read_dataset(dir_ / "ds");
  ASSERT_EQ(back.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(back[i].xs, data[i].xs);
}

TEST_F(IoTest, FieldRoundTrip) {
  FieldOptions o;
  o.n_space = 32;
  o.n_times = 5;
  const FieldGrid g = generate_field(SystemSpec::with_defaults(SystemName::Heat1D), o);
  io::write_field_dataset(dir_ / "f", g, {});
  const FieldGrid back = io::read_field_dataset(dir_ / "f");
  EXPECT_EQ(back.u, g.u);
  EXPECT_EQ(back.ts, g.ts);
  EXPECT_LT((back.xs - g.xs).cwiseAbs().maxCoeff(), 1e-12);
  io::save_field(dir_ / "f.rock", g);
  EXPECT_EQ(io::load_field(dir_ / "f.rock").u, g.u);
}

TEST_F(IoTest, ModelRoundTripIsBitExact) {
  GenerateOptions o;
  o.n_traj = 3;
  o.samples_per_traj = 30;
  const TrajectorySet data = generate(SystemSpec::with_defaults(SystemName::Lorenz63), o);
  for (const KernelSpec& k : {KernelSpec::matern10(5.0), KernelSpec::random_fourier(6.0, 32, 4)}) {
    const RockModel m = train(data, k, 1e-5, 3);
    io::save_model(dir_ / "m.rock", m, {{"tag", 1}});
    const RockModel back = io::load_model(dir_ / "m.rock");
    EXPECT_EQ(back.coeffs, m.coeffs);
    EXPECT_EQ(back.sample_weights, m.sample_weights);
    EXPECT_TRUE(back.kernel == m.kernel);
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(21, 0.0, 0.2);
    EXPECT_EQ(forecast(back, data[0].xs.col(0), grid, Integrator::RK4),
              forecast(m, data[0].xs.col(0), grid, Integrator::RK4));
    EXPECT_EQ(io::read_container_header(dir_ / "m.rock")["metadata"]["tag"], 1);
  }
}

TEST_F(IoTest, PdeModelRoundTrip) {
  PdeModel m;
  m.features.degree = 2;
  m.alpha = Eigen::VectorXd::LinSpaced(m.features.dimension(), -1.0, 1.0);
  m.lambda = 1e-3;
  m.coarsen = 2;
  m.h = 0.25;
  io::save_pde_model(dir_ / "p.rock", m);
  const PdeModel back = io::load_pde_model(dir_ / "p.rock");
  EXPECT_EQ(back.alpha, m.alpha);
  EXPECT_EQ(back.features.degree, 2);
  EXPECT_EQ(back.coarsen, 2);
  EXPECT_EQ(back.h, 0.25);
}

TEST_F(IoTest, ContainerRejectsGarbage) {
  std::ofstream(dir_ / "junk.rock") << "not a container at all";
  EXPECT_THROW(io::read_container(dir_ / "junk.rock"), Error);
  io::Container c;
  c.header["format"] = "rock-field-v1";
  c.arrays["a"] = Eigen::MatrixXd::Identity(2, 3);
  io::write_container(dir_ / "c.rock", c);
  const io::Container back = io::read_container(dir_ / "c.rock");
  EXPECT_EQ(back.arrays.at("a"), c.arrays.at("a"));
  EXPECT_THROW(io::load_model(dir_ / "c.rock"), Error);
}

TEST(KernelJson, RoundTrip) {
  const KernelSpec k = KernelSpec::random_fourier(1.5, 64, 3, 2.0);
  EXPECT_TRUE(io::kernel_from_json(io::kernel_to_json(k)) == k);
  EXPECT_EQ(io::kernel_to_json(KernelSpec::gaussian(1.5)).dump(), R"({"family":"gaussian","scale":1.5})");
  EXPECT_THROW(io::kernel_from_json({{"family", "gaussian"}}), Error);
}

}  // namespace
}  // namespace rock
