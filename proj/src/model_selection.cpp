#include "rock/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "rock/error.hpp"
#include "rock/parallel.hpp"

namespace rock {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

Trajectory slice(const Trajectory& t, Eigen::Index first, Eigen::Index last) {
  Trajectory out;
  out.ts = t.ts.segment(first, last - first + 1);
  out.xs = t.xs.middleCols(first, last - first + 1);
  return out;
}

TrajectorySet merge(const TrajectorySet& a, const TrajectorySet& b) {
  std::vector<Trajectory> all = a.trajectories();
  all.insert(all.end(), b.trajectories().begin(), b.trajectories().end());
  return TrajectorySet(std::move(all));
}

// strict "a is better than b"
bool better(const SearchLogEntry& a, const SearchLogEntry& b) {
  if (a.err != b.err) return a.err < b.err;
  if (a.one_err != b.one_err) return a.one_err < b.one_err;
  return a.model_size < b.model_size;
}

SearchLogEntry fit_and_score(const std::string& stage, const SearchConfig& config,
                             const SearchSpace& space, const TrajectorySet& train_cut,
                             const TrajectorySet& validation) {
  SearchLogEntry entry;
  entry.stage = stage;
  entry.config = config;
  try {
    const RockModel model = train(train_cut, config.kernel(space), config.lambda, config.p);
    const EvalReport report = evaluate(model, validation, space.integrator);
    entry.err = report.err;
    entry.one_err = report.one_err;
    entry.diverged = report.diverged;
    entry.model_size = report.model_size;
  } catch (const Error& e) {
    entry.err = kInf;
    entry.one_err = kInf;
    entry.diverged = true;
    entry.error = std::string(category_name(e.category())) + ": " + e.what();
  }
  if (std::isnan(entry.err)) entry.err = kInf;
  if (std::isnan(entry.one_err)) entry.one_err = kInf;
  return entry;
}

std::size_t best_index(const std::vector<SearchLogEntry>& entries, std::size_t first,
                       std::size_t count) {
  std::size_t best = first;
  for (std::size_t i = first + 1; i < first + count; ++i) {
    if (better(entries[i], entries[best])) best = i;
  }
  return best;
}

[[noreturn]] void search_failure(const std::string& stage, const std::vector<SearchLogEntry>& log) {
  std::ostringstream msg;
  msg << "every configuration diverged in " << stage << ";";
  for (const auto& e : log) {
    if (!e.error.empty()) {
      msg << ' ' << e.error << ';';
      break;
    }
  }
  msg << " evaluated " << log.size() << " configurations";
  throw Error(ErrorCategory::SearchFailure, msg.str());
}

}  // namespace

DatasetSplit split_dataset(const TrajectorySet& data, std::uint64_t seed) {
  const std::size_t n = data.size();
  if (n < 5) {
    throw Error(ErrorCategory::InputDomain,
                "split_dataset needs at least 5 trajectories; provide splits manually");
  }
  const auto n_val = static_cast<std::size_t>(std::llround(0.2 * static_cast<double>(n)));
  const std::size_t n_train = n - 2 * n_val;
  const auto idx = shuffled_indices(n, seed);
  std::vector<Trajectory> train, val1, val2;
  for (std::size_t k = 0; k < n; ++k) {
    const Trajectory& t = data[idx[k]];
    if (k < n_train) {
      train.push_back(t);
    } else if (k < n_train + n_val) {
      val1.push_back(t);
    } else {
      val2.push_back(t);
    }
  }
  return {TrajectorySet(std::move(train)), TrajectorySet(std::move(val1)),
          TrajectorySet(std::move(val2))};
}

DatasetSplit split_by_time(const Trajectory& trajectory) {
  const Eigen::Index intervals = trajectory.size() - 1;
  if (intervals < 5) {
    throw Error(ErrorCategory::InputDomain, "time split needs at least 6 samples");
  }
  const Eigen::Index n_val = std::max<Eigen::Index>(1, std::llround(0.2 * intervals));
  const Eigen::Index n_train = intervals - 2 * n_val;
  DatasetSplit out;
  out.train = TrajectorySet({slice(trajectory, 0, n_train)});
  out.val1 = TrajectorySet({slice(trajectory, n_train, n_train + n_val)});
  out.val2 = TrajectorySet({slice(trajectory, n_train + n_val, intervals)});
  return out;
}

TrajectorySet cut_trajectories(const TrajectorySet& data, int length) {
  if (length < 2) throw Error(ErrorCategory::Config, "cut length must be >= 2");
  std::vector<Trajectory> out;
  for (const Trajectory& t : data.trajectories()) {
    const Eigen::Index last = t.size() - 1;
    Eigen::Index start = 0;
    while (start < last) {
      const Eigen::Index end = std::min<Eigen::Index>(start + length - 1, last);
      out.push_back(slice(t, start, end));
      start = end;
    }
  }
  return TrajectorySet(std::move(out));
}

double median_pairwise_distance(const TrajectorySet& data, int max_samples, std::uint64_t seed) {
  const Eigen::MatrixXd X = data.flattened_states();
  if (X.cols() < 2) throw Error(ErrorCategory::InputDomain, "need at least 2 samples");
  auto idx = shuffled_indices(static_cast<std::size_t>(X.cols()), seed);
  idx.resize(std::min<std::size_t>(idx.size(), static_cast<std::size_t>(max_samples)));
  std::sort(idx.begin(), idx.end());
  Eigen::MatrixXd sub(X.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) sub.col(k) = X.col(idx[k]);
  const Eigen::MatrixXd d2 = squared_distances(sub, sub);
  std::vector<double> dist;
  for (Eigen::Index j = 0; j < d2.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < d2.rows(); ++i) dist.push_back(std::sqrt(d2(i, j)));
  }
  auto mid = dist.begin() + static_cast<std::ptrdiff_t>(dist.size() / 2);
  std::nth_element(dist.begin(), mid, dist.end());
  return *mid;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  if (n < 1 || !(lo > 0.0) || !(hi > 0.0)) {
    throw Error(ErrorCategory::Config, "log grid needs n >= 1 and positive bounds");
  }
  if (n == 1) return {lo};
  std::vector<double> out(n);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < n; ++i) out[i] = std::exp(a + (b - a) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

void SearchSpace::validate() const {
  if (kernels.empty() || scales.empty() || lambdas.empty() || ps.empty() || cut_lengths.empty()) {
    throw Error(ErrorCategory::Config, "search grids must be nonempty");
  }
  for (double s : scales) {
    if (!(s > 0.0)) throw Error(ErrorCategory::Config, "kernel scales must be positive");
  }
  for (double l : lambdas) {
    if (!(l > 0.0)) throw Error(ErrorCategory::Config, "lambdas must be positive");
  }
  for (int p : ps) {
    if (p < 1) throw Error(ErrorCategory::Config, "feature counts must be >= 1");
  }
  for (int L : cut_lengths) {
    if (L < 2) throw Error(ErrorCategory::Config, "cut lengths must be >= 2");
  }
}

KernelSpec SearchConfig::kernel(const SearchSpace& space) const {
  if (family == KernelFamily::RandomFourier) {
    return KernelSpec::random_fourier(scale, space.rff_features, space.seed);
  }
  KernelSpec k{family, scale, std::nullopt};
  k.validate();
  return k;
}

SearchResult two_stage_search(const TrajectorySet& data, const SearchSpace& space) {
  space.validate();
  data.validate();
  const DatasetSplit split =
      data.size() == 1 ? split_by_time(data[0]) : split_dataset(data, space.seed);

  struct Structure {
    KernelFamily family;
    int p;
    int cut_length;
  };
  std::vector<Structure> structures;
  for (KernelFamily k : space.kernels) {
    for (int p : space.ps) {
      for (int L : space.cut_lengths) structures.push_back({k, p, L});
    }
  }
  const std::size_t n_scale = space.scales.size();
  const std::size_t n_lambda = space.lambdas.size();
  const std::size_t n_tune = n_scale * n_lambda;
  auto tuned_config = [&](const Structure& s, std::size_t k) {
    return SearchConfig{s.family, space.scales[k / n_lambda], space.lambdas[k % n_lambda], s.p,
                        s.cut_length};
  };

  std::vector<TrajectorySet> cut_train(structures.size());
  for (std::size_t s = 0; s < structures.size(); ++s) {
    cut_train[s] = cut_trajectories(split.train, structures[s].cut_length);
  }

  SearchResult result;

  // stage 1a: tune (scale, lambda) per structure on val1
  std::vector<SearchLogEntry> stage1(structures.size() * n_tune);
  parallel_for(static_cast<long>(stage1.size()), [&](long idx) {
    const std::size_t s = static_cast<std::size_t>(idx) / n_tune;
    const std::size_t k = static_cast<std::size_t>(idx) % n_tune;
    stage1[idx] = fit_and_score("stage1_val1", tuned_config(structures[s], k), space,
                                cut_train[s], split.val1);
  });
  result.log.insert(result.log.end(), stage1.begin(), stage1.end());

  // stage 1b: compare the structures on val2
  std::vector<SearchLogEntry> selection(structures.size());
  parallel_for(static_cast<long>(structures.size()), [&](long s) {
    const std::size_t best = best_index(stage1, static_cast<std::size_t>(s) * n_tune, n_tune);
    selection[s] = fit_and_score("stage1_val2", stage1[best].config, space, cut_train[s],
                                 split.val2);
  });
  result.log.insert(result.log.end(), selection.begin(), selection.end());
  const std::size_t chosen = best_index(selection, 0, selection.size());
  if (!std::isfinite(selection[chosen].err)) search_failure("stage 1", result.log);

  // stage 2: retrain on train + val1, re-tune (scale, lambda) on val2
  const Structure& s = structures[chosen];
  const TrajectorySet combined = cut_trajectories(merge(split.train, split.val1), s.cut_length);
  std::vector<SearchLogEntry> stage2(n_tune);
  parallel_for(static_cast<long>(n_tune), [&](long k) {
    stage2[k] = fit_and_score("stage2_val2", tuned_config(s, static_cast<std::size_t>(k)), space,
                              combined, split.val2);
  });
  result.log.insert(result.log.end(), stage2.begin(), stage2.end());
  const std::size_t final_idx = best_index(stage2, 0, n_tune);
  if (!std::isfinite(stage2[final_idx].err)) search_failure("stage 2", result.log);

  result.best = stage2[final_idx].config;
  result.model = train(combined, result.best.kernel(space), result.best.lambda, result.best.p);
  result.final_validation = evaluate(result.model, split.val2, space.integrator);
  return result;
}

nlohmann::json to_json(const SearchConfig& config) {
  return {{"kernel", to_string(config.family)},
          {"scale", config.scale},
          {"lambda", config.lambda},
          {"p", config.p},
          {"cut_length", config.cut_length}};
}

nlohmann::json to_json(const SearchLogEntry& entry) {
  auto number = [](double v) -> nlohmann::json {
    if (std::isfinite(v)) return v;
    return "inf";
  };
  nlohmann::json j{{"stage", entry.stage},
                   {"config", to_json(entry.config)},
                   {"err", number(entry.err)},
                   {"one_err", number(entry.one_err)},
                   {"model_size", entry.model_size},
                   {"diverged", entry.diverged}};
  if (!entry.error.empty()) j["error"] = entry.error;
  return j;
}

std::string search_log_to_jsonl(const std::vector<SearchLogEntry>& log) {
  std::string out;
  for (const auto& e : log) {
    out += to_json(e).dump();
    out += '\n';
  }
  return out;
}

}  // namespace rock
