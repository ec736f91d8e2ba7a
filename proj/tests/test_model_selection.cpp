#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "rock/dynamics.hpp"
#include "rock/error.hpp"
#include "rock/model_selection.hpp"

namespace rock {
namespace {

TrajectorySet labelled(int n, int m = 3) {
  std::vector<Trajectory> out;
  for (int i = 0; i < n; ++i) {
    Trajectory t;
    t.ts = Eigen::VectorXd::LinSpaced(m, 0.0, 1.0);
    t.xs = Eigen::MatrixXd::Constant(1, m, i);
    out.push_back(t);
  }
  return TrajectorySet(out);
}

std::multiset<double> labels(const TrajectorySet& s) {
  std::multiset<double> out;
  for (const auto& t : s.trajectories()) out.insert(t.xs(0, 0));
  return out;
}

TEST(Split, Sizes150) {
  const DatasetSplit s = split_dataset(labelled(150), 1);
  EXPECT_EQ(s.train.size(), 90u);
  EXPECT_EQ(s.val1.size(), 30u);
  EXPECT_EQ(s.val2.size(), 30u);
}

TEST(Split, DeterministicDisjointCover) {
  const TrajectorySet data = labelled(23);
  const DatasetSplit a = split_dataset(data, 7), b = split_dataset(data, 7);
  EXPECT_EQ(labels(a.train), labels(b.train));
  EXPECT_EQ(labels(a.val2), labels(b.val2));
  std::multiset<double> all = labels(a.train);
  for (double v : labels(a.val1)) all.insert(v);
  for (double v : labels(a.val2)) all.insert(v);
  EXPECT_EQ(all, labels(data));
  EXPECT_EQ(std::set<double>(all.begin(), all.end()).size(), 23u);
  EXPECT_THROW(split_dataset(labelled(4), 0), Error);
}

TEST(Split, ByTime) {
  Trajectory t;
  t.ts = Eigen::VectorXd::LinSpaced(11, 0.0, 1.0);
  t.xs = t.ts.transpose();
  const DatasetSplit s = split_by_time(t);
  EXPECT_EQ(s.train[0].size(), 7);
  EXPECT_EQ(s.val1[0].ts(0), s.train[0].ts(6));
  EXPECT_EQ(s.val2[0].ts(s.val2[0].size() - 1), 1.0);
}

TEST(Cut, WholeLengthUnchanged) {
  const TrajectorySet data = labelled(2, 201);
  const TrajectorySet c = cut_trajectories(data, 201);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c[0].ts, data[0].ts);
}

TEST(Cut, ConsecutivePairs) {
  Trajectory t;
  t.ts = Eigen::VectorXd::LinSpaced(5, 0.0, 4.0);
  t.xs = t.ts.transpose();
  const TrajectorySet c = cut_trajectories(TrajectorySet({t}), 2);
  ASSERT_EQ(c.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(c[k].ts(0), k);
    EXPECT_EQ(c[k].ts(1), k + 1);
  }
}

TEST(Cut, CoversTimeAndKeepsShortTail) {
  Trajectory t;
  t.ts = Eigen::VectorXd::LinSpaced(12, 0.0, 1.1);
  t.xs = t.ts.transpose();
  const TrajectorySet c = cut_trajectories(TrajectorySet({t}), 4);
  double covered = 0.0;
  for (const auto& w : c.trajectories()) covered += w.ts(w.size() - 1) - w.ts(0);
  EXPECT_NEAR(covered, 1.1, 1e-14);
  EXPECT_EQ(c[c.size() - 1].size(), 3);
  EXPECT_THROW(cut_trajectories(TrajectorySet({t}), 1), Error);
}

TEST(LogGrid, Endpoints) {
  const auto g = log_grid(1e-4, 1.0, 5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_NEAR(g[0], 1e-4, 1e-18);
  EXPECT_NEAR(g[2], 1e-2, 1e-15);
  EXPECT_NEAR(g[4], 1.0, 1e-15);
}

TEST(Median, KnownSet) {
  std::vector<Trajectory> ts(1);
  ts[0].ts = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  ts[0].xs.resize(1, 3);
  ts[0].xs << 0.0, 1.0, 3.0;  // distances 1, 2, 3
  EXPECT_DOUBLE_EQ(median_pairwise_distance(TrajectorySet(ts)), 2.0);
}

TrajectorySet decay_data(std::uint64_t seed) {
  std::vector<Trajectory> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    Trajectory t;
    t.ts = Eigen::VectorXd::LinSpaced(21, 0.0, 1.0);
    const double x0 = u(rng);
    t.xs = (x0 * (-t.ts.array()).exp()).matrix().transpose();
    out.push_back(t);
  }
  return TrajectorySet(out);
}

TEST(Search, SingletonEqualsTrain) {
  const TrajectorySet data = decay_data(1);
  SearchSpace space;
  space.scales = {1.5};
  space.lambdas = {1e-5};
  space.ps = {2};
  space.cut_lengths = {6};
  const SearchResult r = two_stage_search(data, space);
  const DatasetSplit split = split_dataset(data, space.seed);
  std::vector<Trajectory> pool = split.train.trajectories();
  for (const auto& t : split.val1.trajectories()) pool.push_back(t);
  const RockModel direct = train(cut_trajectories(TrajectorySet(pool), 6), KernelSpec::gaussian(1.5), 1e-5, 2);
  EXPECT_EQ(r.model.coeffs, direct.coeffs);
  EXPECT_EQ(r.best.p, 2);
}

TEST(Search, NoiselessPrefersSmallLambda) {
  SearchSpace space;
  space.scales = {2.0};
  space.lambdas = {1e-1, 1e-3, 1e-6};
  space.ps = {2};
  space.cut_lengths = {6};
  const SearchResult r = two_stage_search(decay_data(2), space);
  EXPECT_EQ(r.best.lambda, 1e-6);
  int stage2 = 0;
  for (const auto& e : r.log) stage2 += e.stage == "stage2_val2";
  EXPECT_EQ(stage2, 3);
}

TEST(Search, Deterministic) {
  SearchSpace space;
  space.kernels = {KernelFamily::Gaussian, KernelFamily::Laplace};
  space.scales = {1.0, 3.0};
  space.lambdas = {1e-3, 1e-6};
  space.ps = {1, 2};
  space.cut_lengths = {6};
  space.seed = 5;
  const TrajectorySet data = decay_data(3);
  const SearchResult a = two_stage_search(data, space);
  const SearchResult b = two_stage_search(data, space);
  EXPECT_EQ(a.model.coeffs, b.model.coeffs);
  EXPECT_EQ(search_log_to_jsonl(a.log), search_log_to_jsonl(b.log));
}

TEST(Search, InvalidSpace) {
  SearchSpace space;
  space.lambdas = {};
  EXPECT_THROW(two_stage_search(decay_data(4), space), Error);
}

}  // namespace
}  // namespace rock
