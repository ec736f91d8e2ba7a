#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rock/evaluation.hpp"
#include "rock/kernels.hpp"
#include "rock/ode_learner.hpp"

namespace rock {

struct DatasetSplit {
  TrajectorySet train;
  TrajectorySet val1;
  TrajectorySet val2;
};

/// Trajectory-level 60/20/20 split after a seeded shuffle. The two
/// validation sets get round(0.2 n) trajectories each, training gets the
/// rest. Requires at least 5 trajectories.
DatasetSplit split_dataset(const TrajectorySet& data, std::uint64_t seed);

/// Splits a single trajectory by time into three consecutive segments
/// holding 60/20/20 of its intervals; neighbouring segments share the
/// boundary sample.
DatasetSplit split_by_time(const Trajectory& trajectory);

/// Consecutive windows of `length` samples that share their endpoint
/// samples; a shorter final window is kept when it has at least 2 samples.
TrajectorySet cut_trajectories(const TrajectorySet& data, int length);

/// Median pairwise distance over at most max_samples states chosen with a
/// seeded shuffle. Used to centre kernel scale grids.
double median_pairwise_distance(const TrajectorySet& data, int max_samples = 500,
                                std::uint64_t seed = 0);

/// n points geometrically spaced from lo to hi (inclusive).
std::vector<double> log_grid(double lo, double hi, int n);

struct SearchSpace {
  std::vector<KernelFamily> kernels{KernelFamily::Gaussian};
  std::vector<double> scales{1.0};
  std::vector<double> lambdas{1e-6};
  std::vector<int> ps{1};
  std::vector<int> cut_lengths{2};
  std::uint64_t seed = 0;
  /// Used when kernels contains RandomFourier.
  int rff_features = 256;
  IntegratorOptions integrator;

  void validate() const;
};

struct SearchConfig {
  KernelFamily family = KernelFamily::Gaussian;
  double scale = 1.0;
  double lambda = 1e-6;
  int p = 1;
  int cut_length = 2;

  KernelSpec kernel(const SearchSpace& space) const;
};

struct SearchLogEntry {
  std::string stage;
  SearchConfig config;
  double err = 0.0;
  double one_err = 0.0;
  long long model_size = 0;
  bool diverged = false;
  std::string error;
};

struct SearchResult {
  SearchConfig best;
  RockModel model;
  EvalReport final_validation;
  std::vector<SearchLogEntry> log;
};

/// Two-stage hyperparameter selection:
///  1. for every (kernel, p, cut length) pick (scale, lambda) on val1 after
///     training on train, then pick the structural triple on val2;
///  2. retrain on train + val1 with that triple and re-tune (scale, lambda)
///     on val2.
/// Selection is by err, then one_err, then model size, then grid order.
/// Single-trajectory data is split by time instead of by trajectory.
SearchResult two_stage_search(const TrajectorySet& data, const SearchSpace& space);

nlohmann::json to_json(const SearchConfig& config);
nlohmann::json to_json(const SearchLogEntry& entry);
/// One JSON object per line.
std::string search_log_to_jsonl(const std::vector<SearchLogEntry>& log);

}  // namespace rock
